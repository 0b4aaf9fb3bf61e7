#pragma once

// Spin-1/2 coherent states on the complex-disc chart z (|z| < pi), the
// closed-form precession flow they inherit from a diagonal two-level
// Hamiltonian, and the equivalent linear dynamics of the tomographic
// probability vector (p1, p2, p3).
//
// Basis convention: component 0 is the excited level |1>, component 1 the
// ground level |0>; the fiducial state (z = 0) is the ground level.

#include <Eigen/Dense>

#include "varq/common.hpp"

namespace varq::spin {

// Chart point on the sphere of pure states.  The three parameterizations
//   z        (complex disc, |z| < pi),
//   (theta, phi) with theta = 2|z|, phi = arg z,
//   zeta = tan(theta/2) e^{i phi}   (stereographic plane)
// are kept mutually consistent; phi is reported in [0, 2 pi).
struct SpinCoherentPoint {
    Complex z{0.0, 0.0};

    double theta() const;
    double phi() const;
    Complex zeta() const;

    static SpinCoherentPoint from_angles(double theta, double phi);
    static SpinCoherentPoint from_zeta(Complex zeta);
};

// Probabilities of finding spin-up along the x, y, z axes.  Each lies in
// [0, 1]; for a pure state (p1 - 1/2)^2 + (p2 - 1/2)^2 + (p3 - 1/2)^2 = 1/4.
struct ProbabilityVector {
    double p1 = 0.5;
    double p2 = 0.5;
    double p3 = 0.0;
};

// |z> = (sin|z| * z/|z|, cos|z|); the z = 0 limit is (0, 1).
// Throws std::domain_error when |z| >= pi.
Eigen::Vector2cd radcliffe_state(const SpinCoherentPoint& p);

// Rank-one projector |z><z|.
Eigen::Matrix2cd radcliffe_density(const SpinCoherentPoint& p);

// p1 = 1/2 + Re rho_01, p2 = 1/2 + Im rho_01, p3 = rho_00 for a unit-trace
// Hermitian rho in the (excited, ground) basis.
ProbabilityVector extract_probabilities(const Eigen::Matrix2cd& rho);
ProbabilityVector extract_probabilities(const SpinCoherentPoint& p);

// H = (A/2){J+, J-} + (B/2)[J+, J-] = diag((A + B)/2, (A - B)/2).
Eigen::Matrix2cd radcliffe_hamiltonian(double coupling_a, double coupling_b);

struct SpinFlowResult {
    SpinCoherentPoint point;  // z(t) = z0 e^{i B t}
    double phase = 0.0;       // exp(+i t H) |z0> = e^{i phase} |z(t)>
};

// Closed-form precession under exp(+i t H): the chart point rotates rigidly,
// z(t) = z0 e^{i B t}, and the residual global phase is t (A - B)/2.
SpinFlowResult radcliffe_flow(const SpinCoherentPoint& p0, double coupling_a,
                              double coupling_b, double t);

// Generator of the probability dynamics dp/dt = L p + r induced by the
// precession flow: L = [[0, -B, 0], [B, 0, 0], [0, 0, 0]] and
// r = (B/2, -B/2, 0); p3 is conserved (third row of L vanishes).
Eigen::Matrix3d tomographic_generator(double coupling_b);
Eigen::Vector3d tomographic_affine(double coupling_b);

// Closed-form solution of dp/dt = L p + r: (p1 - 1/2, p2 - 1/2) rotates by
// the angle B t and p3 is passed through unchanged (bitwise).
ProbabilityVector tomographic_flow(const ProbabilityVector& p0, double coupling_b,
                                   double t);

// Two-level analogues of the even/odd oscillator cat states,
//   |z,+> ~ cos|z| |0> + sin|z| cos(gamma) |1>,
//   |z,-> ~ sin|z| sin(gamma) |1>,
// normalized numerically.  The mixing angle gamma is caller-supplied; the
// default pi/2 makes |z,+-> agree with the direct superpositions
// |z> +- |-z> of the coherent states above.  parity is +1 or -1.
// Throws std::domain_error when the requested superposition vanishes
// (e.g. parity -1 with z = 0 or gamma = 0).
Eigen::Vector2cd spin_cat_state(Complex z, int parity, double gamma = kPi / 2);
Eigen::Matrix2cd spin_cat_density(Complex z, int parity, double gamma = kPi / 2);

}  // namespace varq::spin
