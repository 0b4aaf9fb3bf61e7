#pragma once

// Small dense linear-algebra helpers on top of Eigen: symmetry checks and an
// SVD-based linear solver that reports kernel and consistency information.
// The solver is the backbone of the reduced-dynamics engine, where the
// two-form matrix may be singular and the kernel directions carry gauge
// freedom that must be handled explicitly rather than silently.

#include <Eigen/Dense>
#include <vector>

namespace varq {

bool is_symmetric(const Eigen::MatrixXd& m, double tol = 1e-12);
bool is_antisymmetric(const Eigen::MatrixXd& m, double tol = 1e-12);

struct KernelSolve {
    // Minimum-norm solution of A x = b over the row space of A.
    Eigen::VectorXd solution;
    // Orthonormal basis of the kernel of A (columns); empty if full rank.
    Eigen::MatrixXd kernel;
    // || A * solution - b ||_2: nonzero when b has a component outside the
    // range of A (inconsistent system).
    double residual = 0.0;
    double sigma_max = 0.0;
    Eigen::Index rank = 0;
};

// Solve A x = b by SVD with relative rank cutoff rel_tol * sigma_max.
// Never throws on singular input; inspect `residual` and `kernel`.
KernelSolve kernel_solve(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                         double rel_tol = 1e-10);

// Same, but throws std::runtime_error("inconsistent constraint ...") when the
// residual exceeds tol_residual * max(1, ||b||).
Eigen::VectorXd solve_linear_with_kernel(const Eigen::MatrixXd& A,
                                         const Eigen::VectorXd& b,
                                         double rel_tol = 1e-10,
                                         double tol_residual = 1e-8);

}  // namespace varq
