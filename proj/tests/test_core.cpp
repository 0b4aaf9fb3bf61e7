#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "varq/linalg.hpp"
#include "varq/ode.hpp"
#include "varq/quadrature.hpp"

using namespace varq;

namespace {

OdeProblem decay_problem() {
    OdeProblem p;
    p.dimension = 1;
    p.t0 = 0.0;
    p.y0 = {1.0};
    p.rhs = [](double, const std::vector<double>& y, std::vector<double>& dydt) {
        dydt[0] = -y[0];
    };
    return p;
}

}  // namespace

TEST_CASE("rk4 converges at fourth order on exponential decay") {
    OdeProblem p = decay_problem();
    const double exact = std::exp(-1.0);

    const double err_coarse =
        std::abs(integrate_rk4(p, 1.0, 0.1).final_state()[0] - exact);
    const double err_fine =
        std::abs(integrate_rk4(p, 1.0, 0.05).final_state()[0] - exact);

    CHECK(err_coarse > 0.0);
    const double ratio = err_coarse / err_fine;
    // Fourth order: halving the step should shrink the error ~16x.
    CHECK(ratio > 12.0);
    CHECK(ratio < 20.0);
}

TEST_CASE("rk4 lands the final sample exactly on t_end") {
    OdeProblem p = decay_problem();
    // dt does not divide the interval; the last step must be shortened.
    OdeSolution s = integrate_rk4(p, 1.0, 0.3);
    CHECK(s.final_time() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(s.final_state()[0] == doctest::Approx(std::exp(-1.0)).epsilon(1e-4));

    OdeSolution m = integrate_implicit_midpoint(p, 1.0, 0.3);
    CHECK(m.final_time() == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("rk4 stride keeps endpoints and reduces samples") {
    OdeProblem p = decay_problem();
    OdeSolution dense = integrate_rk4(p, 1.0, 0.01, 1);
    OdeSolution sparse = integrate_rk4(p, 1.0, 0.01, 10);
    CHECK(dense.times.size() == 101);
    CHECK(sparse.times.size() == 11);
    CHECK(sparse.times.front() == 0.0);
    CHECK(sparse.times.back() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(sparse.final_state()[0] == dense.final_state()[0]);
}

TEST_CASE("rk4 aborts with the blow-up time when the state goes non-finite") {
    OdeProblem p;
    p.dimension = 1;
    p.t0 = 0.0;
    p.y0 = {1.0};
    // y' = y^2 blows up at t = 1; integration past it must fail loudly.
    p.rhs = [](double, const std::vector<double>& y, std::vector<double>& dydt) {
        dydt[0] = y[0] * y[0];
    };
    CHECK_THROWS_WITH_AS(integrate_rk4(p, 2.0, 0.01),
                         doctest::Contains("non-finite state at t ="),
                         std::runtime_error);
}

TEST_CASE("ode input validation") {
    OdeProblem p = decay_problem();
    CHECK_THROWS_AS(integrate_rk4(p, 1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(integrate_rk4(p, 1.0, -0.1), std::invalid_argument);
    CHECK_THROWS_AS(integrate_rk4(p, 0.0, 0.1), std::invalid_argument);
    OdeProblem bad = p;
    bad.y0 = {1.0, 2.0};
    CHECK_THROWS_AS(integrate_rk4(bad, 1.0, 0.1), std::invalid_argument);
}

TEST_CASE("implicit midpoint preserves the circle invariant to near machine") {
    // Harmonic oscillator q' = p, p' = -q: q^2 + p^2 is a quadratic invariant,
    // conserved exactly by the midpoint rule up to the nonlinear-solve floor.
    OdeProblem p;
    p.dimension = 2;
    p.t0 = 0.0;
    p.y0 = {1.0, 0.0};
    p.rhs = [](double, const std::vector<double>& y, std::vector<double>& dydt) {
        dydt[0] = y[1];
        dydt[1] = -y[0];
    };
    OdeSolution s = integrate_implicit_midpoint(p, 1.0, 1e-4, 100);
    double worst = 0.0;
    for (const auto& y : s.states)
        worst = std::max(worst, std::abs(y[0] * y[0] + y[1] * y[1] - 1.0));
    CHECK(worst <= 1e-10);
}

TEST_CASE("implicit midpoint is second order") {
    OdeProblem p = decay_problem();
    const double exact = std::exp(-1.0);
    const double err_coarse =
        std::abs(integrate_implicit_midpoint(p, 1.0, 0.02).final_state()[0] - exact);
    const double err_fine =
        std::abs(integrate_implicit_midpoint(p, 1.0, 0.01).final_state()[0] - exact);
    const double ratio = err_coarse / err_fine;
    CHECK(ratio > 3.5);
    CHECK(ratio < 4.5);
}

TEST_CASE("midpoint and rk4 agree on the spreading-width Hamiltonian") {
    // H = p^2/2 + 1/(8 q^2) governs the width coordinate of a spreading
    // wave packet.  Closed form from (q0, 0): q(t) = sqrt(q0^2 + t^2/(4 q0^2)).
    auto rhs = [](double, const std::vector<double>& y, std::vector<double>& dydt) {
        dydt[0] = y[1];
        dydt[1] = 1.0 / (4.0 * y[0] * y[0] * y[0]);
    };
    const double q0 = 1.0 / std::sqrt(2.0);
    OdeProblem p;
    p.dimension = 2;
    p.t0 = 0.0;
    p.y0 = {q0, 0.0};
    p.rhs = rhs;

    OdeSolution mid = integrate_implicit_midpoint(p, 1.0, 1e-4, 1000);
    OdeSolution rk = integrate_rk4(p, 1.0, 1e-5, 10000);

    const double q_exact = std::sqrt(q0 * q0 + 1.0 / (4.0 * q0 * q0));
    const double p_exact = 1.0 / (4.0 * q0 * q0 * q_exact);
    CHECK(mid.final_state()[0] == doctest::Approx(q_exact).epsilon(1e-8));
    CHECK(mid.final_state()[1] == doctest::Approx(p_exact).epsilon(1e-8));
    CHECK(rk.final_state()[0] == doctest::Approx(q_exact).epsilon(1e-10));
    CHECK(std::abs(mid.final_state()[0] - rk.final_state()[0]) < 1e-8);

    auto energy = [](const std::vector<double>& y) {
        return 0.5 * y[1] * y[1] + 1.0 / (8.0 * y[0] * y[0]);
    };
    const double h0 = energy(mid.states.front());
    double drift = 0.0;
    for (const auto& y : mid.states) drift = std::max(drift, std::abs(energy(y) - h0));
    CHECK(drift <= 1e-9);
}

TEST_CASE("kernel_solve on a full-rank system matches a direct solve") {
    std::mt19937 rng(12345);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::MatrixXd A(6, 6);
    Eigen::VectorXd b(6);
    for (int i = 0; i < 6; ++i) {
        b(i) = gauss(rng);
        for (int j = 0; j < 6; ++j) A(i, j) = gauss(rng);
    }
    KernelSolve ks = kernel_solve(A, b);
    Eigen::VectorXd direct = A.colPivHouseholderQr().solve(b);
    CHECK(ks.rank == 6);
    CHECK(ks.kernel.cols() == 0);
    CHECK(ks.residual <= 1e-10 * b.norm());
    CHECK((ks.solution - direct).norm() <= 1e-9 * direct.norm());
}

TEST_CASE("kernel_solve identifies kernel and returns the minimum-norm solution") {
    std::mt19937 rng(777);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const int n = 8;
    const int rank = 5;

    // Build A = U S V^T with known rank.
    Eigen::MatrixXd raw_u(n, n), raw_v(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            raw_u(i, j) = gauss(rng);
            raw_v(i, j) = gauss(rng);
        }
    Eigen::MatrixXd U = Eigen::HouseholderQR<Eigen::MatrixXd>(raw_u).householderQ();
    Eigen::MatrixXd V = Eigen::HouseholderQR<Eigen::MatrixXd>(raw_v).householderQ();
    Eigen::VectorXd sing = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < rank; ++i) sing(i) = 1.0 + i;
    Eigen::MatrixXd A = U * sing.asDiagonal() * V.transpose();

    Eigen::VectorXd x_true(n);
    for (int i = 0; i < n; ++i) x_true(i) = gauss(rng);
    Eigen::VectorXd b = A * x_true;  // consistent by construction

    KernelSolve ks = kernel_solve(A, b);
    CHECK(ks.rank == rank);
    CHECK(ks.kernel.cols() == n - rank);
    CHECK(ks.residual <= 1e-10 * b.norm());

    // Kernel columns are orthonormal null directions.
    CHECK((A * ks.kernel).cwiseAbs().maxCoeff() <= 1e-10 * ks.sigma_max);
    Eigen::MatrixXd gram = ks.kernel.transpose() * ks.kernel;
    CHECK((gram - Eigen::MatrixXd::Identity(n - rank, n - rank)).cwiseAbs().maxCoeff() <=
          1e-12);

    // Minimum-norm: no component along the kernel.
    CHECK((ks.kernel.transpose() * ks.solution).cwiseAbs().maxCoeff() <= 1e-10);
    // And it still solves the system.
    CHECK((A * ks.solution - b).norm() <= 1e-10 * b.norm());
}

TEST_CASE("solve_linear_with_kernel rejects inconsistent right-hand sides") {
    // Rank-1 matrix; b outside its range.
    Eigen::MatrixXd A(3, 3);
    A << 1, 0, 0,
         0, 0, 0,
         0, 0, 0;
    Eigen::VectorXd b(3);
    b << 1, 1, 0;

    KernelSolve ks = kernel_solve(A, b);
    CHECK(ks.residual == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_WITH_AS(solve_linear_with_kernel(A, b),
                         doctest::Contains("inconsistent constraint"),
                         std::runtime_error);

    Eigen::VectorXd ok(3);
    ok << 2, 0, 0;
    Eigen::VectorXd x = solve_linear_with_kernel(A, ok);
    CHECK(x(0) == doctest::Approx(2.0));
    CHECK(std::abs(x(1)) <= 1e-14);
    CHECK(std::abs(x(2)) <= 1e-14);
}

TEST_CASE("antisymmetric odd-dimension systems are handled through the kernel") {
    Eigen::MatrixXd A(3, 3);
    A << 0, 1, 0,
        -1, 0, 2,
         0, -2, 0;
    CHECK(is_antisymmetric(A));
    CHECK_FALSE(is_symmetric(A));

    Eigen::VectorXd x_true(3);
    x_true << 1.0, 0.5, -2.0;
    Eigen::VectorXd b = A * x_true;
    KernelSolve ks = kernel_solve(A, b);
    CHECK(ks.rank == 2);
    CHECK(ks.kernel.cols() == 1);
    CHECK((A * ks.solution - b).norm() <= 1e-12 * std::max(1.0, b.norm()));
}

TEST_CASE("trapezoid rule input validation") {
    CHECK_THROWS_AS(quadrature_trapezoid({1.0}, {1.0}), std::invalid_argument);
    CHECK_THROWS_AS(quadrature_trapezoid({0.0, 1.0}, {1.0}), std::invalid_argument);
    CHECK_THROWS_AS(quadrature_trapezoid({0.0, 0.0}, {1.0, 1.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(quadrature_trapezoid({1.0, 0.5}, {1.0, 1.0}),
                    std::invalid_argument);
}

TEST_CASE("trapezoid rule is exact on lines and second order on smooth data") {
    // Exact for linear integrands regardless of spacing.
    std::vector<double> x = {0.0, 0.3, 1.1, 2.0};
    std::vector<double> y;
    for (double xi : x) y.push_back(3.0 * xi - 1.0);
    CHECK(quadrature_trapezoid(x, y) == doctest::Approx(4.0).epsilon(1e-14));

    auto sin_error = [](std::size_t n) {
        std::vector<double> xs(n + 1), ys(n + 1);
        for (std::size_t i = 0; i <= n; ++i) {
            xs[i] = M_PI * double(i) / double(n);
            ys[i] = std::sin(xs[i]);
        }
        return std::abs(quadrature_trapezoid(xs, ys) - 2.0);
    };
    const double ratio = sin_error(64) / sin_error(128);
    CHECK(ratio > 3.8);
    CHECK(ratio < 4.2);
}

TEST_CASE("cumulative trapezoid matches the full integral at the endpoint") {
    std::vector<double> x(101), y(101);
    for (int i = 0; i <= 100; ++i) {
        x[i] = 0.02 * i;
        y[i] = std::cos(x[i]);
    }
    std::vector<double> cum = cumulative_trapezoid(x, y);
    CHECK(cum.front() == 0.0);
    CHECK(cum.back() == doctest::Approx(quadrature_trapezoid(x, y)).epsilon(1e-14));
    // Monotone consistency against the closed form sin(x).
    for (int i = 0; i <= 100; ++i)
        CHECK(cum[i] == doctest::Approx(std::sin(x[i])).epsilon(1e-4));
}
