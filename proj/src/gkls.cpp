#include "varq/gkls.hpp"

#include <cmath>
#include <stdexcept>

namespace varq::gkls {

namespace {

constexpr double kNormSlack = 1e-12;

}  // namespace

double BlochState::norm() const {
    return std::sqrt(x * x + y * y + z * z);
}

BlochState gkls_flow(const BlochState& r0, double decay, double t) {
    if (decay < 0.0) {
        throw std::invalid_argument("gkls_flow: decay rate must be nonnegative");
    }
    if (t < 0.0) {
        throw std::invalid_argument("gkls_flow: time must be nonnegative");
    }
    if (r0.norm() > 1.0 + kNormSlack) {
        throw std::domain_error("gkls_flow: Bloch vector lies outside the unit ball");
    }
    const double decay_factor = std::exp(-decay * t);
    const double transverse = 0.5 * (1.0 + decay_factor);
    return BlochState{r0.x * transverse, r0.y * transverse, r0.z * decay_factor};
}

Eigen::Matrix2cd density_matrix(const BlochState& r) {
    // rho_00 = (1 + z)/2 and rho_11 = 1 - rho_00 exactly, so the floating
    // point trace is exactly 1: with u = fl(1 - rho_00), the rounding error
    // in u is below half an ulp of 1, hence fl(rho_00 + u) rounds to 1.
    const double rho00 = 0.5 + 0.5 * r.z;
    const double rho11 = 1.0 - rho00;
    const std::complex<double> off{0.5 * r.x, -0.5 * r.y};
    Eigen::Matrix2cd rho;
    rho(0, 0) = rho00;
    rho(0, 1) = off;
    rho(1, 0) = std::conj(off);
    rho(1, 1) = rho11;
    return rho;
}

Eigen::Matrix2cd apply_channel(const Eigen::Matrix2cd& rho0, double decay, double t) {
    if (decay < 0.0) {
        throw std::invalid_argument("apply_channel: decay rate must be nonnegative");
    }
    if (t < 0.0) {
        throw std::invalid_argument("apply_channel: time must be nonnegative");
    }
    Eigen::Matrix2cd s1;
    s1 << 0.0, 1.0, 1.0, 0.0;
    Eigen::Matrix2cd s2;
    s2 << std::complex<double>{0.0, 0.0}, std::complex<double>{0.0, -1.0},
        std::complex<double>{0.0, 1.0}, std::complex<double>{0.0, 0.0};
    const double decay_factor = std::exp(-decay * t);
    const double keep = 0.5 * (1.0 + decay_factor);
    const double mix = 0.25 * (1.0 - decay_factor);
    return keep * rho0 + mix * (s1 * rho0 * s1 + s2 * rho0 * s2);
}

}  // namespace varq::gkls
