#include "varq/grassmann.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace varq::grassmann {

namespace {

constexpr int kMaxGenerators = 12;

void check_generator_count(int g) {
    if (g < 1 || g > kMaxGenerators)
        throw std::invalid_argument("GrassmannElement: generator count must be in [1, " +
                                    std::to_string(kMaxGenerators) + "]");
}

// Sign of interleaving the ascending word of `a` in front of the ascending
// word of `b`: each generator in b hops over every generator of a with a
// larger index, one transposition per hop.
double interleave_sign(unsigned a, unsigned b) {
    int transpositions = 0;
    for (unsigned rest = b; rest != 0u; rest &= rest - 1u) {
        const int i = std::countr_zero(rest);
        transpositions += std::popcount(a >> (i + 1));
    }
    return (transpositions % 2 == 0) ? 1.0 : -1.0;
}

}  // namespace

GrassmannElement::GrassmannElement(int generators) : generators_(generators) {
    check_generator_count(generators);
    coeff_.assign(std::size_t{1} << generators, Complex{0.0, 0.0});
}

GrassmannElement GrassmannElement::unit(int generators) {
    GrassmannElement e(generators);
    e.coeff_[0] = Complex{1.0, 0.0};
    return e;
}

GrassmannElement GrassmannElement::generator(int generators, int index) {
    GrassmannElement e(generators);
    if (index < 0 || index >= generators)
        throw std::invalid_argument("GrassmannElement::generator: index out of range");
    e.coeff_[std::size_t{1} << index] = Complex{1.0, 0.0};
    return e;
}

Complex GrassmannElement::coefficient(unsigned subset) const {
    if (subset >= coeff_.size())
        throw std::invalid_argument("GrassmannElement::coefficient: subset out of range");
    return coeff_[subset];
}

void GrassmannElement::set_coefficient(unsigned subset, Complex value) {
    if (subset >= coeff_.size())
        throw std::invalid_argument(
            "GrassmannElement::set_coefficient: subset out of range");
    coeff_[subset] = value;
}

double GrassmannElement::max_abs_coefficient() const {
    double m = 0.0;
    for (const Complex& c : coeff_) m = std::max(m, std::abs(c));
    return m;
}

GrassmannElement& GrassmannElement::operator+=(const GrassmannElement& other) {
    if (generators_ != other.generators_)
        throw std::invalid_argument("GrassmannElement: generator count mismatch");
    for (std::size_t s = 0; s < coeff_.size(); ++s) coeff_[s] += other.coeff_[s];
    return *this;
}

GrassmannElement& GrassmannElement::operator-=(const GrassmannElement& other) {
    if (generators_ != other.generators_)
        throw std::invalid_argument("GrassmannElement: generator count mismatch");
    for (std::size_t s = 0; s < coeff_.size(); ++s) coeff_[s] -= other.coeff_[s];
    return *this;
}

GrassmannElement& GrassmannElement::operator*=(Complex s) {
    for (Complex& c : coeff_) c *= s;
    return *this;
}

GrassmannElement operator*(const GrassmannElement& a, const GrassmannElement& b) {
    if (a.generators_ != b.generators_)
        throw std::invalid_argument("GrassmannElement: generator count mismatch");
    GrassmannElement out(a.generators_);
    const std::size_t size = a.coeff_.size();
    for (std::size_t s = 0; s < size; ++s) {
        const Complex& ca = a.coeff_[s];
        if (ca == Complex{0.0, 0.0}) continue;
        for (std::size_t t = 0; t < size; ++t) {
            if ((s & t) != 0u) continue;  // repeated generator: product vanishes
            const Complex& cb = b.coeff_[t];
            if (cb == Complex{0.0, 0.0}) continue;
            out.coeff_[s | t] += interleave_sign(static_cast<unsigned>(s),
                                                 static_cast<unsigned>(t)) *
                                 ca * cb;
        }
    }
    return out;
}

// --- the standard 4-generator algebra (xi, xi*, eta, eta*) -----------------

namespace {
constexpr int kG = 4;
}

GrassmannElement xi() { return GrassmannElement::generator(kG, 0); }
GrassmannElement xi_star() { return GrassmannElement::generator(kG, 1); }
GrassmannElement eta() { return GrassmannElement::generator(kG, 2); }
GrassmannElement eta_star() { return GrassmannElement::generator(kG, 3); }

GrassmannElement super_radius_squared() {
    return (xi_star() * eta_star()) * (eta() * xi());
}

SuperCoherentState super_coherent_state() {
    // X = [[0, b], [c, 0]] with even entries b = eta xi, c = -xi* eta*.
    const GrassmannElement b = eta() * xi();
    const GrassmannElement c = -(xi_star() * eta_star());
    const GrassmannElement one = GrassmannElement::unit(kG);

    // exp(X) = I + X + X^2/2: every entry of X is a two-generator monomial,
    // so X^3 has six-generator entries over four generators and vanishes
    // identically.  X^2 = diag(b c, c b), hence applied to the fiducial
    // (0, 1) the top component is b and the bottom is 1 + (c b)/2.
    return {b, one + (c * b) * Complex{0.5, 0.0}};
}

double super_bracket(int i, int j) {
    if ((i != 1 && i != 2) || (j != 1 && j != 2))
        throw std::invalid_argument("super_bracket: indices must be 1 or 2");

    // The super two-form i eta* eta (dxi1 dxi1 + dxi2 dxi2): its (i, j)
    // coefficient is the even element i eta* eta when i == j and zero
    // otherwise.
    const GrassmannElement unit_even = Complex{0.0, 1.0} * (eta_star() * eta());
    GrassmannElement entry(kG);
    if (i == j) entry = unit_even;

    // Extract the real value by dividing out the even unit: both elements are
    // supported on the {eta, eta*} subset alone.
    const unsigned support = (1u << 2) | (1u << 3);
    const Complex denom = unit_even.coefficient(support);
    const Complex num = entry.coefficient(support);
    // Nothing else may survive in either element.
    for (unsigned s = 0; s < 16u; ++s) {
        if (s == support) continue;
        if (std::abs(entry.coefficient(s)) != 0.0 ||
            std::abs(unit_even.coefficient(s)) != 0.0)
            throw std::logic_error("super_bracket: unexpected support");
    }
    const Complex ratio = num / denom;
    if (std::abs(ratio.imag()) > 1e-15)
        throw std::logic_error("super_bracket: extracted value is not real");
    return ratio.real();
}

std::pair<double, double> super_reduced_flow(double xi1, double xi2,
                                             double coupling_a, double t) {
    const double angle = 0.5 * coupling_a * t;
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    return {xi1 * c + xi2 * s, -xi1 * s + xi2 * c};
}

}  // namespace varq::grassmann
