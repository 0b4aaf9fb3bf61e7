#pragma once

// A small complex Grassmann (exterior) algebra: elements are stored as one
// complex coefficient per subset of the generator set, and the product
// resolves signs by counting the transpositions needed to interleave two
// ordered generator words.  Four generators (16 coefficients) cover the
// supersymmetric coherent-state example; the implementation is generic in
// the generator count up to 12.
//
// The standard 4-generator algebra used below orders its generators as
// (xi, xi*, eta, eta*) = indices (0, 1, 2, 3).

#include <utility>
#include <vector>

#include "varq/common.hpp"

namespace varq::grassmann {

class GrassmannElement {
  public:
    // The zero element of the algebra with `generators` generators.
    explicit GrassmannElement(int generators);

    static GrassmannElement unit(int generators);
    static GrassmannElement generator(int generators, int index);

    int generator_count() const { return generators_; }

    // `subset` is a bitmask over generator indices; the coefficient multiplies
    // the ascending-ordered product of the chosen generators.
    Complex coefficient(unsigned subset) const;
    void set_coefficient(unsigned subset, Complex value);

    double max_abs_coefficient() const;
    bool is_zero() const { return max_abs_coefficient() == 0.0; }

    GrassmannElement& operator+=(const GrassmannElement& other);
    GrassmannElement& operator-=(const GrassmannElement& other);
    GrassmannElement& operator*=(Complex s);

    friend GrassmannElement operator+(GrassmannElement a, const GrassmannElement& b) {
        a += b;
        return a;
    }
    friend GrassmannElement operator-(GrassmannElement a, const GrassmannElement& b) {
        a -= b;
        return a;
    }
    friend GrassmannElement operator*(GrassmannElement a, Complex s) {
        a *= s;
        return a;
    }
    friend GrassmannElement operator*(Complex s, GrassmannElement a) {
        a *= s;
        return a;
    }
    friend GrassmannElement operator-(GrassmannElement a) {
        a *= Complex{-1.0, 0.0};
        return a;
    }

    // Graded (exterior) product.
    friend GrassmannElement operator*(const GrassmannElement& a,
                                      const GrassmannElement& b);

  private:
    int generators_;
    std::vector<Complex> coeff_;  // size 1 << generators_
};

// Generators of the standard 4-generator algebra.
GrassmannElement xi();
GrassmannElement xi_star();
GrassmannElement eta();
GrassmannElement eta_star();

// exp(X) applied to the lower fiducial (0, 1), where
//   X = [[0, eta xi], [-xi* eta*, 0]]
// is the 2x2 generator of the coherent displacement.  The exponential
// terminates exactly (X^3 = 0 by nilpotency) and yields
//   top    = eta xi,
//   bottom = 1 - rho^2 / 2   with rho^2 = (xi* eta*)(eta xi).
struct SuperCoherentState {
    GrassmannElement top;
    GrassmannElement bottom;
};
SuperCoherentState super_coherent_state();

// The square of the even radius element, rho^2 = (xi* eta*)(eta xi).
GrassmannElement super_radius_squared();

// Symmetric bracket {xi_i, xi_j}+ read off the super two-form
//   i eta* eta (dxi1 dxi1 + dxi2 dxi2),
// treating the even element i eta* eta as the unit when extracting real
// values: {xi1, xi1}+ = {xi2, xi2}+ = 1 and {xi1, xi2}+ = 0.  Indices are
// 1 or 2.
double super_bracket(int i, int j);

// Reduced flow of the real coefficient pair (xi1, xi2) generated by
// (A/2)(xi2 d/dxi1 - xi1 d/dxi2): a rigid rotation by the angle A t / 2.
std::pair<double, double> super_reduced_flow(double xi1, double xi2,
                                             double coupling_a, double t);

}  // namespace varq::grassmann
