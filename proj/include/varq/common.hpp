#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

// Units: hbar = m = 1 throughout.

namespace varq {

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;

// Conjugate-linear in the first argument: <u,v> = sum conj(u_i) v_i.
inline Complex inner_product(const ComplexVector& u, const ComplexVector& v) {
    if (u.size() != v.size())
        throw std::invalid_argument("inner_product: size mismatch");
    Complex acc{0.0, 0.0};
    for (std::size_t i = 0; i < u.size(); ++i) acc += std::conj(u[i]) * v[i];
    return acc;
}

inline double norm_sq(const ComplexVector& v) {
    double acc = 0.0;
    for (const Complex& c : v) acc += std::norm(c);
    return acc;
}

inline void scale(ComplexVector& v, Complex s) {
    for (Complex& c : v) c *= s;
}

// v += s * w
inline void axpy(ComplexVector& v, Complex s, const ComplexVector& w) {
    if (v.size() != w.size())
        throw std::invalid_argument("axpy: size mismatch");
    for (std::size_t i = 0; i < v.size(); ++i) v[i] += s * w[i];
}

}  // namespace varq
