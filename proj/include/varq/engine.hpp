#pragma once

// Generic covariant reduction of Schrodinger dynamics to a parameter manifold.
//
// Given an immersion psi(x) of an m-dimensional parameter manifold into state
// space and a Hermitian H, the engine builds, by finite differences,
//
//   theta_j(x) = Im <d_j psi, psi> / <psi, psi>        (one-form)
//   omega_jk(x) = d_j theta_k - d_k theta_j            (two-form, = d theta)
//   E(x) = Re <psi, H psi> / <psi, psi>                (reduced energy)
//
// and solves the reduced equation of motion
//
//   omega(x) . Gamma(x) = dE(x)
//
// for the tangent field Gamma, handling a singular omega by a minimum-norm
// SVD solve with the kernel reported.  Inner products are conjugate-linear in
// the first argument; with this convention the sign above reproduces the
// closed-form reduced fields of the Gaussian family.
//
// Derivatives use five-point (fourth-order) central stencils with a
// per-coordinate step h_j = max(step * max(|x_j|, 1), step_floor): the step is
// relative to the coordinate scale but never collapses near zeros, keeping
// the two-form noise near 1e-10 so that kernel detection stays reliable.

#include <Eigen/Dense>

#include <string>
#include <vector>

#include "varq/immersion.hpp"

namespace varq::engine {

struct FdOptions {
    double step = 1e-5;          // relative finite-difference step
    double step_floor = 1e-7;    // absolute lower bound of the step
    double kernel_rel_tol = 1e-8;  // singular values below this (times sigma_max) are kernel
};

// theta_j = Im <d_j psi, psi> / <psi, psi>.  An immersion failure at any
// stencil point is rethrown with the offending coordinate named.
std::vector<double> cartan_one_form(const Immersion& im, const std::vector<double>& point,
                                    const FdOptions& opt = {});

struct TwoForm {
    Eigen::MatrixXd omega;  // antisymmetric part: the two-form d theta
    double asymmetry = 0.0;  // Frobenius norm of the symmetric residual of the raw matrix
};

// Computes M_jk = -2 Im <d_j psi_hat, d_k psi_hat> on the unit-normalized
// section psi_hat (equal to (d theta)_jk by the product rule) and returns its
// antisymmetrization (M - M^T)/2 together with the discarded asymmetry.
TwoForm lagrangian_two_form(const Immersion& im, const std::vector<double>& point,
                            const FdOptions& opt = {});

// Rayleigh quotient Re <psi, H psi> / <psi, psi>; throws std::domain_error on
// a zero-norm state.
double reduced_energy(const Immersion& im, const HamiltonianAction& ham,
                      const std::vector<double>& point);

// Gradient of reduced_energy by the same stencils.
std::vector<double> energy_differential(const Immersion& im, const HamiltonianAction& ham,
                                        const std::vector<double>& point,
                                        const FdOptions& opt = {});

// Everything the reduced equation needs at one point.
struct ReducedGeometry {
    std::vector<double> point;
    std::vector<double> theta;
    Eigen::MatrixXd omega;       // antisymmetric
    double asymmetry = 0.0;
    std::vector<double> dE;
    Eigen::MatrixXd kernel;      // orthonormal kernel basis of omega (columns)
};

ReducedGeometry reduced_geometry(const Immersion& im, const HamiltonianAction& ham,
                                 const std::vector<double>& point, const FdOptions& opt = {});

struct ReducedField {
    std::vector<double> gamma;   // minimum-norm solution of omega . gamma = dE
    Eigen::MatrixXd kernel;      // orthonormal kernel basis of omega (columns)
    double residual = 0.0;       // || omega . gamma - dE ||
    // True when omega is numerically zero: no dynamical equations remain and
    // the variational condition degenerates to the constraint dE = 0. The
    // residual then equals ||dE|| and measures how badly that constraint fails.
    bool no_dynamics = false;
};

ReducedField reduced_field(const Immersion& im, const HamiltonianAction& ham,
                           const std::vector<double>& point, const FdOptions& opt = {});

struct ReducedTrajectory {
    std::vector<double> times;
    std::vector<std::vector<double>> points;
    std::vector<double> energies;         // reduced energy at each stored point
    std::vector<Eigen::Index> kernel_dims;  // kernel dimension at each stored point
    double max_residual = 0.0;            // worst solve residual seen at stored points
};

// RK4 integration of the reduced field from p0 to t_end with step dt; states
// stored every `stride` steps and at t_end.  Throws std::runtime_error with a
// "no dynamics" message if omega degenerates to zero while dE does not vanish.
ReducedTrajectory integrate_reduced(const Immersion& im, const HamiltonianAction& ham,
                                    const std::vector<double>& p0, double dt, double t_end,
                                    const FdOptions& opt = {}, std::size_t stride = 1);

}  // namespace varq::engine
