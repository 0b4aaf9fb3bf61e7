#include "varq/linalg.hpp"

#include <stdexcept>

namespace varq {

bool is_symmetric(const Eigen::MatrixXd& m, double tol) {
    if (m.rows() != m.cols()) return false;
    return (m - m.transpose()).cwiseAbs().maxCoeff() <= tol;
}

bool is_antisymmetric(const Eigen::MatrixXd& m, double tol) {
    if (m.rows() != m.cols()) return false;
    return (m + m.transpose()).cwiseAbs().maxCoeff() <= tol;
}

KernelSolve kernel_solve(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                         double rel_tol) {
    if (A.rows() != b.size())
        throw std::invalid_argument("kernel_solve: dimension mismatch between A and b");

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeFullV);
    const Eigen::VectorXd& sigma = svd.singularValues();

    KernelSolve out;
    out.sigma_max = sigma.size() > 0 ? sigma(0) : 0.0;
    const double cut = rel_tol * out.sigma_max;

    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < sigma.size(); ++i)
        if (sigma(i) > cut) ++rank;
    out.rank = rank;

    // Minimum-norm solution: pseudo-inverse applied to b.
    Eigen::VectorXd utb = svd.matrixU().transpose() * b;
    Eigen::VectorXd coef = Eigen::VectorXd::Zero(A.cols());
    for (Eigen::Index i = 0; i < rank; ++i) coef(i) = utb(i) / sigma(i);
    out.solution = svd.matrixV() * coef;

    const Eigen::Index null_dim = A.cols() - rank;
    if (null_dim > 0)
        out.kernel = svd.matrixV().rightCols(null_dim);
    else
        out.kernel.resize(A.cols(), 0);

    out.residual = (A * out.solution - b).norm();
    return out;
}

Eigen::VectorXd solve_linear_with_kernel(const Eigen::MatrixXd& A,
                                         const Eigen::VectorXd& b,
                                         double rel_tol, double tol_residual) {
    KernelSolve ks = kernel_solve(A, b, rel_tol);
    const double scale = std::max(1.0, b.norm());
    if (ks.residual > tol_residual * scale)
        throw std::runtime_error(
            "inconsistent constraint: right-hand side has a component outside "
            "the range of the coefficient matrix");
    return ks.solution;
}

}  // namespace varq
