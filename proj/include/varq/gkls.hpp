#pragma once

// Qubit relaxation channel with decay rate c >= 0, in Bloch coordinates:
//   x(t) = x (1 + e^{-ct}) / 2,
//   y(t) = y (1 + e^{-ct}) / 2,
//   z(t) = z e^{-ct}.
// The equatorial disc (z = 0) is exactly invariant, and every Bloch point
// relaxes towards (x/2, y/2, 0).  The equivalent operator-sum form is
//   rho_t = ((1 + e^{-ct})/2) rho + ((1 - e^{-ct})/4)(s1 rho s1 + s2 rho s2).

#include <Eigen/Dense>

namespace varq::gkls {

struct BlochState {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    double norm() const;
};

// Closed-form channel action on a Bloch vector.  Throws std::domain_error
// when |r0| > 1 (not a state) and std::invalid_argument for c < 0 or t < 0.
BlochState gkls_flow(const BlochState& r0, double decay, double t);

// rho = (I + x s1 + y s2 + z s3)/2, assembled so the trace is exactly 1 in
// floating point (the lower diagonal entry is computed as 1 - rho_00).
Eigen::Matrix2cd density_matrix(const BlochState& r);

// The operator-sum form applied to an arbitrary 2x2 matrix; agrees with
// density_matrix(gkls_flow(...)) on states.
Eigen::Matrix2cd apply_channel(const Eigen::Matrix2cd& rho0, double decay, double t);

}  // namespace varq::gkls
