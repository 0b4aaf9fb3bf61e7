#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <Eigen/Dense>
#include <cmath>
#include <algorithm>
#include <complex>
#include <random>
#include <vector>

#include "varq/common.hpp"
#include "varq/fermi.hpp"
#include "varq/fock.hpp"
#include "varq/ode.hpp"
#include "varq/spin.hpp"

using namespace varq;
using spin::SpinCoherentPoint;

namespace {

std::mt19937 rng(20240815u);

constexpr Complex kI{0.0, 1.0};

// exp(i s H) for Hermitian H via a dense eigendecomposition: the independent
// oracle for every closed-form flow below.
Eigen::MatrixXcd expi(const Eigen::MatrixXcd& h, double s) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  const Eigen::VectorXd lam = es.eigenvalues();
  Eigen::VectorXcd phases(lam.size());
  for (Eigen::Index k = 0; k < lam.size(); ++k) phases(k) = std::exp(kI * (s * lam(k)));
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

Complex random_disc(double radius) {
  std::uniform_real_distribution<double> u(-radius, radius);
  while (true) {
    const Complex z{u(rng), u(rng)};
    if (std::abs(z) <= radius) return z;
  }
}

Eigen::VectorXcd to_eigen(const ComplexVector& v) {
  Eigen::VectorXcd out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out(static_cast<Eigen::Index>(i)) = v[i];
  return out;
}

// Number operator, truncated mode lowering operator, and the diagonal
// deformation f(n) as dense matrices, for building oscillator Hamiltonians
// the long way round.
Eigen::MatrixXcd lowering(int cutoff) {
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(cutoff + 1, cutoff + 1);
  for (int n = 1; n <= cutoff; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

Eigen::MatrixXcd mode_diagonal(const fock::ModeFunction& f, int cutoff) {
  Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(cutoff + 1, cutoff + 1);
  for (int n = 1; n <= cutoff; ++n) d(n, n) = f(n);
  return d;
}

// H = ((A+B)/2) Af+ Af + ((A-B)/2) Af Af+ assembled from operator products.
Eigen::MatrixXcd operator_hamiltonian(const fock::ModeFunction& f, double a_c,
                                      double b_c, int cutoff) {
  const Eigen::MatrixXcd af = lowering(cutoff) * mode_diagonal(f, cutoff);
  return 0.5 * (a_c + b_c) * af.adjoint() * af + 0.5 * (a_c - b_c) * af * af.adjoint();
}

}  // namespace

// --------------------------------------------------------------------------
// Spin coherent states
// --------------------------------------------------------------------------

TEST_CASE("spin chart conversions are mutually consistent") {
  for (int trial = 0; trial < 50; ++trial) {
    const SpinCoherentPoint p{random_disc(3.0)};
    if (std::abs(p.z) < 1e-3) continue;

    const SpinCoherentPoint back = SpinCoherentPoint::from_angles(p.theta(), p.phi());
    CHECK(std::abs(back.z - p.z) <= 1e-12 * std::max(1.0, std::abs(p.z)));

    // Stereographic chart only covers theta < pi.
    if (p.theta() < kPi - 1e-6) {
      const SpinCoherentPoint back2 = SpinCoherentPoint::from_zeta(p.zeta());
      CHECK(std::abs(back2.z - p.z) <= 1e-10 * std::max(1.0, std::abs(p.z)));
      CHECK(std::abs(p.zeta() - std::tan(0.5 * p.theta()) *
                                    std::exp(kI * p.phi())) <= 1e-10);

      // The stereographic column vector (zeta, 1)/sqrt(1+|zeta|^2) is the
      // same state.
      const Complex zeta = p.zeta();
      Eigen::Vector2cd v;
      v << zeta, Complex{1.0, 0.0};
      v /= std::sqrt(1.0 + std::norm(zeta));
      CHECK((v - spin::radcliffe_state(p)).norm() <= 1e-12);
    }
  }
}

TEST_CASE("spin coherent states at pinned points") {
  const Eigen::Vector2cd ground = spin::radcliffe_state({{0.0, 0.0}});
  CHECK(std::abs(ground(0)) == 0.0);
  CHECK(std::abs(ground(1) - 1.0) == 0.0);
  CHECK(spin::extract_probabilities(SpinCoherentPoint{{0.0, 0.0}}).p3 == 0.0);

  // z = pi/2 on the positive real axis: fully excited.
  const SpinCoherentPoint top{{0.5 * kPi, 0.0}};
  const Eigen::Vector2cd excited = spin::radcliffe_state(top);
  CHECK(std::abs(excited(0) - 1.0) <= 1e-15);
  CHECK(std::abs(excited(1)) <= 1e-15);
  CHECK(spin::extract_probabilities(top).p3 == doctest::Approx(1.0).epsilon(1e-14));

  CHECK_THROWS_AS(spin::radcliffe_state({{kPi, 0.0}}), std::domain_error);
  CHECK_THROWS_AS(spin::radcliffe_state({{0.0, 3.5}}), std::domain_error);
}

TEST_CASE("spin density is a unit-trace projector with the closed-form probabilities") {
  for (int trial = 0; trial < 50; ++trial) {
    const SpinCoherentPoint p{random_disc(3.1)};
    const Eigen::Matrix2cd rho = spin::radcliffe_density(p);

    CHECK(std::abs(rho.trace() - 1.0) <= 1e-14);
    CHECK((rho * rho - rho).norm() <= 1e-12);
    CHECK((rho - rho.adjoint()).norm() <= 1e-15);

    const spin::ProbabilityVector pv = spin::extract_probabilities(rho);
    const double r = std::abs(p.z);
    const double phi = p.phi();
    CHECK(pv.p3 == doctest::Approx(std::sin(r) * std::sin(r)).epsilon(1e-12));
    CHECK(pv.p1 - 0.5 ==
          doctest::Approx(0.5 * std::cos(phi) * std::sin(2.0 * r)).epsilon(1e-12));
    CHECK(pv.p2 - 0.5 ==
          doctest::Approx(0.5 * std::sin(phi) * std::sin(2.0 * r)).epsilon(1e-12));
    CHECK(pv.p1 >= 0.0);
    CHECK(pv.p1 <= 1.0);
    CHECK(pv.p2 >= 0.0);
    CHECK(pv.p2 <= 1.0);
    CHECK(pv.p3 >= 0.0);
    CHECK(pv.p3 <= 1.0);
  }
}

TEST_CASE("spin precession matches the dense matrix-exponential oracle") {
  std::uniform_real_distribution<double> uc(-2.0, 2.0);
  std::uniform_real_distribution<double> ut(0.0, 3.0);
  for (int trial = 0; trial < 40; ++trial) {
    const SpinCoherentPoint p0{random_disc(3.0)};
    const double a_c = uc(rng), b_c = uc(rng), t = ut(rng);

    // Hamiltonian assembled from the raising/lowering expressions rather
    // than its diagonal closed form.
    Eigen::Matrix2cd jp = Eigen::Matrix2cd::Zero();
    jp(0, 1) = 1.0;
    const Eigen::Matrix2cd jm = jp.adjoint();
    const Eigen::Matrix2cd h =
        0.5 * a_c * (jp * jm + jm * jp) + 0.5 * b_c * (jp * jm - jm * jp);
    CHECK((h - spin::radcliffe_hamiltonian(a_c, b_c)).norm() <= 1e-15);

    const Eigen::Vector2cd evolved = expi(h, t) * spin::radcliffe_state(p0);

    const spin::SpinFlowResult fl = spin::radcliffe_flow(p0, a_c, b_c, t);
    const Eigen::Vector2cd reconstructed =
        std::exp(kI * fl.phase) * spin::radcliffe_state(fl.point);

    CHECK((evolved - reconstructed).norm() <= 1e-10);
    const double overlap = std::abs(evolved.dot(reconstructed));
    CHECK(overlap >= 1.0 - 1e-10);

    // Radius preserved to rounding (the update multiplies by a unit phase).
    CHECK(std::abs(std::abs(fl.point.z) - std::abs(p0.z)) <=
          1e-15 * std::max(1.0, std::abs(p0.z)));
  }
}

TEST_CASE("spin precession pinned cases") {
  const SpinCoherentPoint p0{{0.3, 0.0}};

  const spin::SpinFlowResult still = spin::radcliffe_flow(p0, 1.3, 0.0, 2.7);
  CHECK(std::abs(still.point.z - p0.z) == 0.0);  // B = 0: the label is frozen

  // B t = 2 pi: one full revolution.
  const spin::SpinFlowResult loop = spin::radcliffe_flow(p0, 0.0, 2.0, kPi);
  CHECK(std::abs(loop.point.z - p0.z) <= 1e-12);
}

TEST_CASE("induced spin flow is linear on the chart") {
  // The chart update z -> z e^{iBt} is additive and homogeneous even though
  // the immersion itself is nonlinear; floating-point distributivity holds
  // to a few ulps.
  std::uniform_real_distribution<double> ut(0.0, 3.0);
  for (int trial = 0; trial < 30; ++trial) {
    const Complex z1 = random_disc(1.0);
    const Complex z2 = random_disc(1.0);
    const double b_c = ut(rng), t = ut(rng);
    const Complex sum_flow =
        spin::radcliffe_flow({z1 + z2}, 0.0, b_c, t).point.z;
    const Complex flow_sum = spin::radcliffe_flow({z1}, 0.0, b_c, t).point.z +
                             spin::radcliffe_flow({z2}, 0.0, b_c, t).point.z;
    CHECK(std::abs(sum_flow - flow_sum) <= 2e-15 * (std::abs(z1) + std::abs(z2) + 1.0));

    const Complex scaled = spin::radcliffe_flow({2.0 * z1}, 0.0, b_c, t).point.z;
    CHECK(std::abs(scaled - 2.0 * spin::radcliffe_flow({z1}, 0.0, b_c, t).point.z) <=
          2e-15 * std::max(1.0, std::abs(z1)));
  }
}

// --------------------------------------------------------------------------
// Tomographic probability flow
// --------------------------------------------------------------------------

TEST_CASE("tomographic flow solves the printed linear ODE") {
  const double b_c = 1.0;
  const Eigen::Matrix3d l = spin::tomographic_generator(b_c);
  const Eigen::Vector3d r = spin::tomographic_affine(b_c);
  CHECK(l.row(2).norm() == 0.0);  // p3 row vanishes

  const spin::ProbabilityVector p0{0.81, 0.33, 0.44};

  // Independent oracle: RK4 on dp/dt = L p + r.
  OdeProblem prob;
  prob.dimension = 3;
  prob.t0 = 0.0;
  prob.y0 = {p0.p1, p0.p2, p0.p3};
  prob.rhs = [&](double, const std::vector<double>& y, std::vector<double>& dy) {
    for (int i = 0; i < 3; ++i)
      dy[i] = l(i, 0) * y[0] + l(i, 1) * y[1] + l(i, 2) * y[2] + r(i);
  };
  const auto sol = integrate_rk4(prob, 0.7, 1e-4);
  const auto& yf = sol.states.back();

  const spin::ProbabilityVector pt = spin::tomographic_flow(p0, b_c, 0.7);
  CHECK(std::abs(pt.p1 - yf[0]) <= 1e-8);
  CHECK(std::abs(pt.p2 - yf[1]) <= 1e-8);
  CHECK(std::abs(pt.p3 - yf[2]) <= 1e-12);

  const spin::ProbabilityVector frozen = spin::tomographic_flow(p0, 0.0, 5.0);
  CHECK(frozen.p1 == p0.p1);
  CHECK(frozen.p2 == p0.p2);
  CHECK(frozen.p3 == p0.p3);
}

TEST_CASE("tomographic flow equals probabilities of the unitarily evolved state") {
  std::uniform_real_distribution<double> uc(-2.0, 2.0);
  std::uniform_real_distribution<double> ut(0.0, 4.0);
  for (int trial = 0; trial < 20; ++trial) {
    const SpinCoherentPoint p0{random_disc(3.0)};
    const double a_c = uc(rng), b_c = uc(rng), t = ut(rng);

    // rho(t) via the dense propagator.
    const Eigen::Matrix2cd u = expi(spin::radcliffe_hamiltonian(a_c, b_c), t);
    const Eigen::Matrix2cd rho_t = u * spin::radcliffe_density(p0) * u.adjoint();
    const spin::ProbabilityVector from_rho = spin::extract_probabilities(rho_t);

    const spin::ProbabilityVector from_ode =
        spin::tomographic_flow(spin::extract_probabilities(p0), b_c, t);

    CHECK(std::abs(from_ode.p1 - from_rho.p1) <= 1e-8);
    CHECK(std::abs(from_ode.p2 - from_rho.p2) <= 1e-8);
    CHECK(std::abs(from_ode.p3 - from_rho.p3) <= 1e-12);

    // p3 is passed through bitwise.
    CHECK(from_ode.p3 == spin::extract_probabilities(p0).p3);
  }
}

// --------------------------------------------------------------------------
// Spin cat states
// --------------------------------------------------------------------------

TEST_CASE("spin cats at the default mixing angle reproduce direct superpositions") {
  const Complex z{0.6, 0.45};
  const SpinCoherentPoint plus{z}, minus{-z};
  const Eigen::Vector2cd direct_even =
      (spin::radcliffe_state(plus) + spin::radcliffe_state(minus)).normalized();
  const Eigen::Vector2cd direct_odd =
      (spin::radcliffe_state(plus) - spin::radcliffe_state(minus)).normalized();

  const Eigen::Vector2cd even = spin::spin_cat_state(z, +1);
  const Eigen::Vector2cd odd = spin::spin_cat_state(z, -1);

  // Compare projectors: the constructions fix different global phases.
  CHECK((even * even.adjoint() - direct_even * direct_even.adjoint()).norm() <= 1e-14);
  CHECK((odd * odd.adjoint() - direct_odd * direct_odd.adjoint()).norm() <= 1e-14);
}

TEST_CASE("spin cat densities match the closed forms at a generic mixing angle") {
  const Complex z{0.8, -0.35};
  const double gamma = 0.7;
  const double r = std::abs(z);

  const Eigen::Matrix2cd rho_plus = spin::spin_cat_density(z, +1, gamma);
  const double n2p = 1.0 / (std::sin(r) * std::sin(r) * std::cos(gamma) * std::cos(gamma) +
                            std::cos(r) * std::cos(r));
  CHECK(std::abs(rho_plus(0, 0) -
                 n2p * std::sin(r) * std::sin(r) * std::cos(gamma) * std::cos(gamma)) <=
        1e-14);
  CHECK(std::abs(rho_plus(0, 1) - n2p * 0.5 * std::sin(2.0 * r) * std::cos(gamma)) <=
        1e-14);
  CHECK(std::abs(rho_plus(1, 1) - n2p * std::cos(r) * std::cos(r)) <= 1e-14);
  CHECK(std::abs(rho_plus.trace() - 1.0) <= 1e-14);

  // The odd cat is the pure excited level whenever it exists at all.
  const Eigen::Matrix2cd rho_minus = spin::spin_cat_density(z, -1, gamma);
  CHECK(std::abs(rho_minus(0, 0) - 1.0) <= 1e-14);
  CHECK(std::abs(rho_minus(1, 1)) <= 1e-14);

  CHECK_THROWS_AS(spin::spin_cat_state({0.0, 0.0}, -1), std::domain_error);
  CHECK_THROWS_AS(spin::spin_cat_state(z, -1, 0.0), std::domain_error);
  CHECK_THROWS_AS(spin::spin_cat_state({0.5 * kPi, 0.0}, +1), std::domain_error);
}

// --------------------------------------------------------------------------
// Bosonic and f-oscillator coherent states
// --------------------------------------------------------------------------

TEST_CASE("displacement coherent state has the closed-form coefficients") {
  const Complex z{0.7, -0.4};
  const fock::FockState s = fock::bosonic_coherent_state(z, 48);

  CHECK(s.norm() == doctest::Approx(1.0).epsilon(1e-12));

  // Coefficient ratios c_n / c_0 = (-z*)^n / sqrt(n!).
  Complex expect{1.0, 0.0};
  for (int n = 1; n <= 10; ++n) {
    expect *= -std::conj(z) / std::sqrt(static_cast<double>(n));
    CHECK(std::abs(s.coefficients[n] / s.coefficients[0] - expect) <= 1e-12);
  }

  // Mean occupation of a coherent state is |z|^2.
  double nbar = 0.0;
  for (int n = 0; n <= s.cutoff; ++n) nbar += n * std::norm(s.coefficients[n]);
  CHECK(nbar == doctest::Approx(std::norm(z)).epsilon(1e-10));

  // Inadmissible truncation is rejected.
  CHECK_THROWS_AS(fock::bosonic_coherent_state({6.0, 0.0}, 16), std::domain_error);
}

TEST_CASE("f-oscillator state reduces to the series coherent state at f == 1") {
  const Complex z{0.5, 0.9};
  const fock::FockState s = fock::f_oscillator_state(z, fock::unit_mode(), 48);
  Complex expect{1.0, 0.0};
  for (int n = 1; n <= 10; ++n) {
    expect *= z / std::sqrt(static_cast<double>(n));
    CHECK(std::abs(s.coefficients[n] / s.coefficients[0] - expect) <= 1e-12);
  }

  // f(n) = sqrt((n+1)/(n+2)): the factorial telescopes, [f(n)]! = sqrt(2/(n+2)).
  const fock::ModeFunction f = [](int n) {
    return std::sqrt((n + 1.0) / (n + 2.0));
  };
  const fock::FockState sf = fock::f_oscillator_state(z, f, 48);
  for (int n = 1; n <= 10; ++n) {
    Complex en = std::pow(z, n) / std::sqrt(std::tgamma(n + 1.0)) /
                 std::sqrt(2.0 / (n + 2.0));
    CHECK(std::abs(sf.coefficients[n] / sf.coefficients[0] - en) <= 1e-10);
  }

  CHECK_THROWS_AS(
      fock::f_oscillator_state(z, [](int) { return 0.0; }, 48),
      std::invalid_argument);
}

TEST_CASE("f-oscillator spectrum matches the operator-built Hamiltonian") {
  const fock::ModeFunction f = [](int n) {
    return std::sqrt((n + 1.0) / (n + 2.0));
  };
  const int cutoff = 24;
  const double a_c = 1.3, b_c = -0.4;

  const std::vector<double> e = fock::f_oscillator_energies(f, a_c, b_c, cutoff);
  const Eigen::MatrixXcd h = operator_hamiltonian(f, a_c, b_c, cutoff);

  // Off-diagonal must vanish; the diagonal matches except at the truncation
  // edge, where the finite matrix cannot represent Af Af+.
  for (int m = 0; m <= cutoff; ++m)
    for (int n = 0; n <= cutoff; ++n)
      if (m != n) CHECK(std::abs(h(m, n)) <= 1e-14);
  for (int n = 0; n < cutoff; ++n)
    CHECK(std::abs(h(n, n).real() - e[static_cast<std::size_t>(n)]) <= 1e-12);

  // f == 1 closed form: E_n = A n + (A - B)/2.
  const std::vector<double> e1 =
      fock::f_oscillator_energies(fock::unit_mode(), a_c, b_c, cutoff);
  for (int n = 0; n <= cutoff; ++n)
    CHECK(std::abs(e1[static_cast<std::size_t>(n)] -
                   (a_c * n + 0.5 * (a_c - b_c))) <= 1e-13);
}

TEST_CASE("displacement family flow is certified by the truncated expm oracle") {
  std::uniform_real_distribution<double> uc(-1.5, 1.5);
  std::uniform_real_distribution<double> ut(0.0, 2.0);
  const int cutoff = 64;
  for (int trial = 0; trial < 10; ++trial) {
    const Complex z = random_disc(1.5);
    const double a_c = uc(rng), b_c = uc(rng), t = ut(rng);

    const fock::FockState s0 = fock::bosonic_coherent_state(z, cutoff);
    const Eigen::MatrixXcd h = operator_hamiltonian(fock::unit_mode(), a_c, b_c, cutoff);
    const Eigen::VectorXcd evolved = expi(h, -t) * to_eigen(s0.coefficients);

    const fock::FlowResult fl = fock::bosonic_flow(z, a_c, b_c, t);
    const fock::FockState target = fock::bosonic_coherent_state(fl.z, cutoff);
    const Eigen::VectorXcd reconstructed =
        std::exp(kI * fl.phase) * to_eigen(target.coefficients);

    CHECK(std::abs(evolved.dot(reconstructed)) >= 1.0 - 1e-10);
    CHECK((evolved - reconstructed).norm() <= 1e-8);

    // |z(t)| is preserved to rounding and the label flow is linear to ulps.
    CHECK(std::abs(std::abs(fl.z) - std::abs(z)) <= 1e-15 * std::max(1.0, std::abs(z)));
  }
}

TEST_CASE("closed-form diagonal evolution agrees with the operator oracle on f-states") {
  const fock::ModeFunction f = [](int n) {
    return std::sqrt((n + 1.0) / (n + 2.0));
  };
  const int cutoff = 48;
  const Complex z{1.0, 0.0};
  const double a_c = 1.0, b_c = 0.3, t = 0.7;

  const fock::FockState s0 = fock::f_oscillator_state(z, f, cutoff);
  const fock::FockState via_spectrum = fock::evolve_diagonal(
      s0, fock::f_oscillator_energies(f, a_c, b_c, cutoff), t);

  const Eigen::MatrixXcd h = operator_hamiltonian(f, a_c, b_c, cutoff);
  const Eigen::VectorXcd via_matrix = expi(h, -t) * to_eigen(s0.coefficients);

  // The only disagreement is the truncation edge of Af Af+, far below the
  // tail tolerance.
  CHECK((via_matrix - to_eigen(via_spectrum.coefficients)).norm() <= 1e-9);
  CHECK(via_spectrum.norm() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("f == 1 evolution never leaves the coherent family") {
  Complex best{0.0, 0.0};
  const double leak =
      fock::f_leakage({1.0, 0.0}, fock::unit_mode(), 1.0, 0.3, 0.5, 64, &best);
  CHECK(leak <= 1e-8);
  // Under exp(-iHt) the series label rotates to z e^{-iAt}.
  CHECK(std::abs(best - std::exp(-kI * 0.5) * Complex{1.0, 0.0}) <= 1e-5);

  // Vacuum is an eigenstate for every f: no leakage, for any mode function.
  const fock::ModeFunction f = [](int n) { return std::sqrt(n / (n + 1.0)); };
  CHECK(fock::f_leakage({0.0, 0.0}, f, 1.0, 0.0, 1.7, 32) <= 1e-12);
}

TEST_CASE("nonconstant admissible mode functions destroy the family evolution") {
  // f(n) = sqrt(n): admissible form sqrt((ln + a)/(gn + d)) with l=1, a=0,
  // g=0, d=1.  Strongly anharmonic spectrum, visible leakage already at
  // t = 0.1 (measured 4.4e-3).
  const fock::ModeFunction froot = [](int n) { return std::sqrt(static_cast<double>(n)); };
  const double leak_root = fock::f_leakage({1.0, 0.0}, froot, 1.0, 0.0, 0.1, 64);
  CHECK(leak_root > 1e-3);
  CHECK(leak_root < 0.5);

  // f(n) = sqrt((n+1)/(n+2)) tends to 1 at large n, so its dephasing is much
  // weaker: measured 2.9e-5 at the same label and time — clearly nonzero
  // (three orders above the f == 1 floor) but far below 1e-3.
  const fock::ModeFunction fmild = [](int n) {
    return std::sqrt((n + 1.0) / (n + 2.0));
  };
  const double leak_mild = fock::f_leakage({1.0, 0.0}, fmild, 1.0, 0.0, 0.1, 64);
  CHECK(leak_mild > 1e-5);
  CHECK(leak_mild < 1e-4);
}

// --------------------------------------------------------------------------
// Cat states
// --------------------------------------------------------------------------

TEST_CASE("cat states have definite parity and unit norm") {
  const Complex z{1.0, 0.0};
  const fock::FockState even = fock::cat_state(z, +1);
  const fock::FockState odd = fock::cat_state(z, -1);

  CHECK(even.norm() == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(odd.norm() == doctest::Approx(1.0).epsilon(1e-10));

  for (int n = 0; n <= even.cutoff; ++n) {
    if (n % 2 == 1) CHECK(std::abs(even.coefficients[n]) <= 1e-14);
    if (n % 2 == 0) CHECK(std::abs(odd.coefficients[n]) <= 1e-14);
  }

  CHECK_THROWS_AS(fock::cat_state({0.0, 0.0}, -1), std::domain_error);
  // z = 0 even cat is just the vacuum.
  const fock::FockState vac = fock::cat_state({0.0, 0.0}, +1);
  CHECK(std::abs(vac.coefficients[0] - 1.0) <= 1e-14);
}

TEST_CASE("evolved cat equals the cat of the flowed label") {
  const Complex z{1.1, 0.4};
  const double a_c = 0.9, b_c = 0.2, t = 1.3;
  const int cutoff = 64;

  const fock::FockState cat0 = fock::cat_state(z, +1, cutoff);
  const Eigen::MatrixXcd h = operator_hamiltonian(fock::unit_mode(), a_c, b_c, cutoff);
  const Eigen::VectorXcd evolved = expi(h, -t) * to_eigen(cat0.coefficients);

  const fock::FlowResult fl = fock::bosonic_flow(z, a_c, b_c, t);
  const fock::FockState target = fock::cat_state(fl.z, +1, cutoff);

  const double overlap = std::abs(evolved.dot(to_eigen(target.coefficients)));
  CHECK(overlap >= 1.0 - 1e-8);

  // Odd cats ride the same label flow.
  const fock::FockState odd0 = fock::cat_state(z, -1, cutoff);
  const Eigen::VectorXcd odd_t = expi(h, -t) * to_eigen(odd0.coefficients);
  const fock::FockState odd_target = fock::cat_state(fl.z, -1, cutoff);
  CHECK(std::abs(odd_t.dot(to_eigen(odd_target.coefficients))) >= 1.0 - 1e-8);
}

// --------------------------------------------------------------------------
// Fermionic two-mode states
// --------------------------------------------------------------------------

TEST_CASE("fermi mode operators satisfy the anticommutation relations") {
  const Eigen::Matrix4cd c1 = fermi::annihilator(1);
  const Eigen::Matrix4cd c2 = fermi::annihilator(2);
  const Eigen::Matrix4cd id = Eigen::Matrix4cd::Identity();

  const auto anti = [](const Eigen::Matrix4cd& x, const Eigen::Matrix4cd& y) {
    return x * y + y * x;
  };

  CHECK(anti(c1, c2).norm() <= 1e-14);
  CHECK(anti(c1, c2.adjoint()).norm() <= 1e-14);
  CHECK(anti(c1, c1).norm() <= 1e-14);
  CHECK(anti(c2, c2).norm() <= 1e-14);
  CHECK((anti(c1, c1.adjoint()) - id).norm() <= 1e-14);
  CHECK((anti(c2, c2.adjoint()) - id).norm() <= 1e-14);

  // The vacuum |00> (4th basis vector) is annihilated by both modes.
  Eigen::Vector4cd vac = Eigen::Vector4cd::Zero();
  vac(3) = 1.0;
  CHECK((c1 * vac).norm() == 0.0);
  CHECK((c2 * vac).norm() == 0.0);
}

TEST_CASE("fermi displacement equals the exponential of its generator") {
  for (int trial = 0; trial < 20; ++trial) {
    const Complex z1 = random_disc(1.2);
    const Complex z2 = random_disc(1.2);

    const Eigen::Matrix4cd c1 = fermi::annihilator(1);
    const Eigen::Matrix4cd c2 = fermi::annihilator(2);
    const Eigen::Matrix4cd x = z1 * c1 - std::conj(z1) * c1.adjoint() +
                               z2 * c2 - std::conj(z2) * c2.adjoint();
    // x is anti-Hermitian: exp(x) = exp(i * (-i x)) with -i x Hermitian.
    const Eigen::Matrix4cd ex = expi(-kI * x, 1.0);

    const Eigen::Matrix4cd u = fermi::displacement(z1, z2);
    CHECK((u - ex).norm() <= 1e-13);
    CHECK((u * u.adjoint() - Eigen::Matrix4cd::Identity()).norm() <= 1e-13);
  }
  CHECK((fermi::displacement({0, 0}, {0, 0}) - Eigen::Matrix4cd::Identity()).norm() ==
        0.0);
}

TEST_CASE("fermi Hamiltonian is diagonal with the half-sum frequencies") {
  const fermi::TwoModeParams p{1.1, 0.7, -0.4, 0.9};
  const Eigen::Matrix4cd h = fermi::two_mode_hamiltonian(p);
  for (int m = 0; m < 4; ++m)
    for (int n = 0; n < 4; ++n)
      if (m != n) CHECK(std::abs(h(m, n)) <= 1e-15);
  CHECK(h(0, 0).real() == doctest::Approx(p.omega1()).epsilon(1e-14));
  CHECK(h(1, 1).real() == doctest::Approx(p.omega2()).epsilon(1e-14));
  CHECK(h(2, 2).real() == doctest::Approx(p.omega3()).epsilon(1e-14));
  CHECK(h(3, 3).real() == doctest::Approx(p.omega4()).epsilon(1e-14));
}

TEST_CASE("vacuum-fiducial fermi flow matches the expm oracle") {
  std::uniform_real_distribution<double> uc(-1.5, 1.5);
  std::uniform_real_distribution<double> ut(0.0, 3.0);
  for (int trial = 0; trial < 25; ++trial) {
    const Complex z1 = random_disc(1.0);
    const Complex z2 = random_disc(1.0);
    const fermi::TwoModeParams p{uc(rng), uc(rng), uc(rng), uc(rng)};
    const double t = ut(rng);

    const Eigen::Vector4cd psi0 =
        fermi::two_mode_state(z1, z2, fermi::Fiducial::kVacuum);
    const Eigen::Vector4cd evolved = expi(fermi::two_mode_hamiltonian(p), t) * psi0;

    const fermi::TwoModeFlowResult fl =
        fermi::two_mode_flow(z1, z2, p, t, fermi::Fiducial::kVacuum);
    CHECK(fl.family_preserved);
    const Eigen::Vector4cd reconstructed =
        std::exp(kI * fl.phase) *
        fermi::two_mode_state(fl.z1, fl.z2, fermi::Fiducial::kVacuum);

    CHECK((evolved - reconstructed).norm() <= 1e-12);
    CHECK(std::abs(evolved.dot(reconstructed)) >= 1.0 - 1e-10);
  }

  // z1 = z2 = 0: the fiducial itself, frozen up to phase.
  const fermi::TwoModeFlowResult frozen = fermi::two_mode_flow(
      {0, 0}, {0, 0}, {1.0, 0.5, 0.3, 0.2}, 1.0, fermi::Fiducial::kVacuum);
  CHECK(std::abs(frozen.z1) == 0.0);
  CHECK(std::abs(frozen.z2) == 0.0);
}

TEST_CASE("entangled-fiducial fermi flow is preserved exactly when B1 == B2") {
  std::uniform_real_distribution<double> uc(-1.5, 1.5);
  std::uniform_real_distribution<double> ut(0.1, 3.0);
  for (int trial = 0; trial < 25; ++trial) {
    const Complex z1 = random_disc(1.0);
    const Complex z2 = random_disc(1.0);
    const double b_common = uc(rng);
    const fermi::TwoModeParams p{uc(rng), b_common, uc(rng), b_common};
    const double t = ut(rng);

    const Eigen::Vector4cd psi0 =
        fermi::two_mode_state(z1, z2, fermi::Fiducial::kEntangled);
    const Eigen::Vector4cd evolved = expi(fermi::two_mode_hamiltonian(p), t) * psi0;

    const fermi::TwoModeFlowResult fl =
        fermi::two_mode_flow(z1, z2, p, t, fermi::Fiducial::kEntangled);
    CHECK(fl.family_preserved);
    const Eigen::Vector4cd reconstructed =
        std::exp(kI * fl.phase) *
        fermi::two_mode_state(fl.z1, fl.z2, fermi::Fiducial::kEntangled);

    CHECK((evolved - reconstructed).norm() <= 1e-12);
    CHECK(std::abs(evolved.dot(reconstructed)) >= 1.0 - 1e-8);
    CHECK(fermi::entangled_family_deficit(z1, z2, p, t) <= 1e-28);
  }
}

TEST_CASE("entangled-fiducial fermi flow leaves the family when B1 != B2") {
  const Complex z1{0.5, 0.0};
  const Complex z2{0.0, 0.5};
  const fermi::TwoModeParams p{0.8, 1.0, -0.3, 0.5};  // B1 - B2 = 0.5
  const double t = 0.25 * kPi / (p.b1 - p.b2);        // (B1 - B2) t = pi/4

  const fermi::TwoModeFlowResult fl =
      fermi::two_mode_flow(z1, z2, p, t, fermi::Fiducial::kEntangled);
  CHECK_FALSE(fl.family_preserved);

  const double deficit = fermi::entangled_family_deficit(z1, z2, p, t);
  CHECK(deficit > 1e-6);

  // Closed form of the out-of-family mass: cos^2(r) sin^2((B1-B2) t / 2).
  const double r = std::sqrt(std::norm(z1) + std::norm(z2));
  const double expect = std::cos(r) * std::cos(r) * std::sin(kPi / 8.0) *
                        std::sin(kPi / 8.0);
  CHECK(deficit == doctest::Approx(expect).epsilon(1e-12));

  // And the deficit really lower-bounds 1 - |<family|psi(t)>|^2: scan a
  // moderate grid of candidate labels.
  const Eigen::Vector4cd psi_t =
      expi(fermi::two_mode_hamiltonian(p), t) *
      fermi::two_mode_state(z1, z2, fermi::Fiducial::kEntangled);
  double best = 0.0;
  for (int i = 0; i < 21; ++i)
    for (int j = 0; j < 21; ++j) {
      const double ph1 = 2.0 * kPi * i / 21.0;
      const double ph2 = 2.0 * kPi * j / 21.0;
      const Eigen::Vector4cd cand = fermi::two_mode_state(
          std::abs(z1) * std::exp(kI * ph1), std::abs(z2) * std::exp(kI * ph2),
          fermi::Fiducial::kEntangled);
      best = std::max(best, std::norm(psi_t.dot(cand)));
    }
  CHECK(1.0 - best >= deficit - 1e-12);
}
