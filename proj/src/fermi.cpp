#include "varq/fermi.hpp"

#include <cmath>
#include <stdexcept>

namespace varq::fermi {

namespace {

constexpr Complex kI{0.0, 1.0};

// sin(r)/r, continuous at r = 0.
double sinc(double r) {
    if (r < 1e-8) return 1.0 - r * r / 6.0;
    return std::sin(r) / r;
}

bool couplings_equal(double b1, double b2) {
    return std::abs(b1 - b2) <= 1e-12 * std::max({1.0, std::abs(b1), std::abs(b2)});
}

Eigen::Matrix4cd kron2(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
    Eigen::Matrix4cd out;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
    return out;
}

}  // namespace

Eigen::Matrix4cd annihilator(int mode) {
    Eigen::Matrix2cd c = Eigen::Matrix2cd::Zero();
    c(1, 0) = 1.0;  // |1> -> |0> in the single-mode basis (|1>, |0>)
    Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
    Eigen::Matrix2cd s3 = Eigen::Matrix2cd::Zero();
    s3(0, 0) = 1.0;
    s3(1, 1) = -1.0;
    if (mode == 1) return kron2(c, id);
    if (mode == 2) return kron2(s3, c);
    throw std::invalid_argument("fermi::annihilator: mode must be 1 or 2");
}

Eigen::Matrix4cd two_mode_hamiltonian(const TwoModeParams& p) {
    const Eigen::Matrix4cd c1 = annihilator(1);
    const Eigen::Matrix4cd c2 = annihilator(2);
    const Eigen::Matrix4cd id = Eigen::Matrix4cd::Identity();
    const Eigen::Matrix4cd n1 = c1.adjoint() * c1;
    const Eigen::Matrix4cd n2 = c2.adjoint() * c2;
    // {c+, c} = I and [c+, c] = 2 c+ c - I for canonical fermionic modes.
    return 0.5 * p.a1 * id + 0.5 * p.b1 * (2.0 * n1 - id) +
           0.5 * p.a2 * id + 0.5 * p.b2 * (2.0 * n2 - id);
}

Eigen::Matrix4cd displacement(Complex z1, Complex z2) {
    const double r = std::sqrt(std::norm(z1) + std::norm(z2));
    const double cr = std::cos(r);
    const double s = sinc(r);
    Eigen::Matrix4cd u;
    u << cr, -s * std::conj(z2), -s * std::conj(z1), 0.0,
         s * z2, cr, 0.0, -s * std::conj(z1),
         s * z1, 0.0, cr, s * std::conj(z2),
         0.0, s * z1, -s * z2, cr;
    return u;
}

Eigen::Vector4cd two_mode_state(Complex z1, Complex z2, Fiducial fiducial) {
    Eigen::Vector4cd base = Eigen::Vector4cd::Zero();
    switch (fiducial) {
        case Fiducial::kVacuum:
            base(3) = 1.0;
            break;
        case Fiducial::kEntangled:
            base(1) = 1.0 / std::sqrt(2.0);
            base(2) = 1.0 / std::sqrt(2.0);
            break;
    }
    return displacement(z1, z2) * base;
}

TwoModeFlowResult two_mode_flow(Complex z1, Complex z2, const TwoModeParams& p,
                                double t, Fiducial fiducial) {
    TwoModeFlowResult out;
    out.z1 = z1 * std::exp(-kI * (p.b1 * t));
    out.z2 = z2 * std::exp(-kI * (p.b2 * t));
    switch (fiducial) {
        case Fiducial::kVacuum:
            out.phase = p.omega4() * t;
            out.family_preserved = true;
            break;
        case Fiducial::kEntangled:
            out.phase = 0.5 * (p.a1 + p.a2) * t;
            out.family_preserved = couplings_equal(p.b1, p.b2);
            break;
    }
    return out;
}

double entangled_family_deficit(Complex z1, Complex z2, const TwoModeParams& p,
                                double t) {
    const Eigen::Vector4cd psi0 = two_mode_state(z1, z2, Fiducial::kEntangled);
    Eigen::Vector4cd psi_t;
    const double w[4] = {p.omega1(), p.omega2(), p.omega3(), p.omega4()};
    for (int k = 0; k < 4; ++k) psi_t(k) = psi0(k) * std::exp(kI * (w[k] * t));
    // (|10> - |01>)/sqrt(2) is orthogonal to the whole entangled family,
    // whose middle components are always equal.
    const Complex a = (psi_t(1) - psi_t(2)) / std::sqrt(2.0);
    return std::norm(a);
}

}  // namespace varq::fermi
