#include "varq/spin.hpp"

#include <cmath>
#include <stdexcept>

namespace varq::spin {

namespace {

constexpr Complex kI{0.0, 1.0};

void check_chart(const Complex& z) {
    if (!(std::abs(z) < kPi))
        throw std::domain_error("spin chart: |z| must be < pi, got |z| = " +
                                std::to_string(std::abs(z)));
}

double wrap_angle(double a) {
    // Map into [0, 2 pi).
    a = std::fmod(a, 2.0 * kPi);
    if (a < 0.0) a += 2.0 * kPi;
    return a;
}

}  // namespace

double SpinCoherentPoint::theta() const { return 2.0 * std::abs(z); }

double SpinCoherentPoint::phi() const {
    if (std::abs(z) == 0.0) return 0.0;
    return wrap_angle(std::arg(z));
}

Complex SpinCoherentPoint::zeta() const {
    const double r = std::abs(z);
    if (r == 0.0) return {0.0, 0.0};
    return std::tan(r) * (z / r);
}

SpinCoherentPoint SpinCoherentPoint::from_angles(double theta, double phi) {
    return {0.5 * theta * std::exp(kI * phi)};
}

SpinCoherentPoint SpinCoherentPoint::from_zeta(Complex zeta) {
    const double r = std::abs(zeta);
    if (r == 0.0) return {{0.0, 0.0}};
    return {std::atan(r) * (zeta / r)};
}

Eigen::Vector2cd radcliffe_state(const SpinCoherentPoint& p) {
    check_chart(p.z);
    const double r = std::abs(p.z);
    Eigen::Vector2cd v;
    if (r == 0.0) {
        v << Complex{0.0, 0.0}, Complex{1.0, 0.0};
    } else {
        v << std::sin(r) * (p.z / r), Complex{std::cos(r), 0.0};
    }
    return v;
}

Eigen::Matrix2cd radcliffe_density(const SpinCoherentPoint& p) {
    const Eigen::Vector2cd v = radcliffe_state(p);
    return v * v.adjoint();
}

ProbabilityVector extract_probabilities(const Eigen::Matrix2cd& rho) {
    ProbabilityVector pv;
    pv.p1 = 0.5 + rho(0, 1).real();
    pv.p2 = 0.5 + rho(0, 1).imag();
    pv.p3 = rho(0, 0).real();
    return pv;
}

ProbabilityVector extract_probabilities(const SpinCoherentPoint& p) {
    return extract_probabilities(radcliffe_density(p));
}

Eigen::Matrix2cd radcliffe_hamiltonian(double coupling_a, double coupling_b) {
    Eigen::Matrix2cd h = Eigen::Matrix2cd::Zero();
    h(0, 0) = 0.5 * (coupling_a + coupling_b);
    h(1, 1) = 0.5 * (coupling_a - coupling_b);
    return h;
}

SpinFlowResult radcliffe_flow(const SpinCoherentPoint& p0, double coupling_a,
                              double coupling_b, double t) {
    check_chart(p0.z);
    SpinFlowResult out;
    out.point.z = p0.z * std::exp(kI * (coupling_b * t));
    out.phase = 0.5 * t * (coupling_a - coupling_b);
    return out;
}

Eigen::Matrix3d tomographic_generator(double coupling_b) {
    Eigen::Matrix3d l = Eigen::Matrix3d::Zero();
    l(0, 1) = -coupling_b;
    l(1, 0) = coupling_b;
    return l;
}

Eigen::Vector3d tomographic_affine(double coupling_b) {
    return {0.5 * coupling_b, -0.5 * coupling_b, 0.0};
}

ProbabilityVector tomographic_flow(const ProbabilityVector& p0, double coupling_b,
                                   double t) {
    const double c = std::cos(coupling_b * t);
    const double s = std::sin(coupling_b * t);
    const double u = p0.p1 - 0.5;
    const double v = p0.p2 - 0.5;
    ProbabilityVector out;
    out.p1 = 0.5 + c * u - s * v;
    out.p2 = 0.5 + s * u + c * v;
    out.p3 = p0.p3;  // conserved: the generator has a vanishing third row
    return out;
}

Eigen::Vector2cd spin_cat_state(Complex z, int parity, double gamma) {
    if (parity != 1 && parity != -1)
        throw std::invalid_argument("spin_cat_state: parity must be +1 or -1");
    check_chart(z);
    const double r = std::abs(z);
    Eigen::Vector2cd v;
    if (parity == 1) {
        v << Complex{std::sin(r) * std::cos(gamma), 0.0}, Complex{std::cos(r), 0.0};
    } else {
        v << Complex{std::sin(r) * std::sin(gamma), 0.0}, Complex{0.0, 0.0};
    }
    const double n = v.norm();
    if (n < 1e-14)
        throw std::domain_error(
            "spin_cat_state: the requested superposition vanishes (z = 0 or "
            "degenerate mixing angle)");
    return v / n;
}

Eigen::Matrix2cd spin_cat_density(Complex z, int parity, double gamma) {
    const Eigen::Vector2cd v = spin_cat_state(z, parity, gamma);
    return v * v.adjoint();
}

}  // namespace varq::spin
