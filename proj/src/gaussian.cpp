#include "varq/gaussian.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "varq/quadrature.hpp"

namespace varq::gaussian {

namespace {

bool finite6(const std::array<double, 6>& v) {
  for (double x : v) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

}  // namespace

void validate(const GaussianParams& p) {
  if (!finite6(p.as_array())) throw std::domain_error("gaussian: non-finite parameter");
  if (!(p.a_R > 0.0)) throw std::domain_error("gaussian: a_R must be positive");
}

void validate(const ModelParams& m) {
  if (!std::isfinite(m.omega) || !std::isfinite(m.lambda))
    throw std::domain_error("gaussian: non-finite model parameter");
  if (m.omega < 0.0) throw std::domain_error("gaussian: omega must be >= 0");
  if (m.lambda < 0.0) throw std::domain_error("gaussian: lambda must be >= 0");
}

Complex GaussianParams::evaluate(double x) const {
  return std::exp(-a() * (x * x) + b() * x + c());
}

double GaussianParams::norm_squared() const {
  return std::exp(2.0 * c_R) * std::sqrt(kPi / (2.0 * a_R)) *
         std::exp(b_R * b_R / (2.0 * a_R));
}

double GaussianParams::mean_p() const { return b_I - 2.0 * a_I * mean_x(); }

double GaussianParams::mean_p2() const {
  const double a2 = a_R * a_R + a_I * a_I;
  const double re_ab = a_R * b_R + a_I * b_I;  // Re(a conj(b))
  const double b2 = b_R * b_R + b_I * b_I;
  return 4.0 * a2 * mean_x2() - 4.0 * re_ab * mean_x() + b2;
}

GaussianParams GaussianParams::normalized() const {
  GaussianParams out = *this;
  out.c_R -= 0.5 * std::log(norm_squared());
  return out;
}

std::array<double, 6> free_field(const GaussianParams& p) {
  validate(p);
  const double aR = p.a_R, aI = p.a_I, bR = p.b_R, bI = p.b_I;
  return {4.0 * aR * aI,
          2.0 * (aI * aI - aR * aR),
          2.0 * (aI * bR + aR * bI),
          2.0 * (aI * bI - aR * bR),
          aI - bR * bI,
          -aR + 0.5 * (bR * bR - bI * bI)};
}

std::array<double, 6> harmonic_field(const GaussianParams& p, const ModelParams& m) {
  validate(m);
  std::array<double, 6> f = free_field(p);
  f[1] += 0.5 * m.omega * m.omega;
  return f;
}

std::array<double, 4> anharmonic_field(const GaussianParams& p, const ModelParams& m) {
  validate(m);
  const std::array<double, 6> h = harmonic_field(p, m);
  std::array<double, 4> f = {h[0], h[1], h[2], h[3]};
  if (m.lambda != 0.0) {
    const double aR = p.a_R, bR = p.b_R;
    f[1] += 3.0 * m.lambda * (aR + bR * bR) / (4.0 * aR * aR);
    f[3] += m.lambda * bR * bR * bR / (2.0 * aR * aR * aR);
  }
  return f;
}

double anharmonic_energy(const GaussianParams& p, const ModelParams& m) {
  validate(p);
  validate(m);
  const double aR = p.a_R, aI = p.a_I, bR = p.b_R, bI = p.b_I;
  const double cross = aI * bR - aR * bI;
  double e = 0.5 * aR + aI * aI / (2.0 * aR) + cross * cross / (2.0 * aR * aR);
  if (m.omega != 0.0) {
    const double w2 = m.omega * m.omega;
    e += w2 / (8.0 * aR) + w2 * bR * bR / (8.0 * aR * aR);
  }
  if (m.lambda != 0.0) {
    const double aR2 = aR * aR, bR2 = bR * bR;
    e += 3.0 * m.lambda / (32.0 * aR2) + 3.0 * bR2 * m.lambda / (16.0 * aR2 * aR) +
         bR2 * bR2 * m.lambda / (32.0 * aR2 * aR2);
  }
  return e;
}

namespace {

// c integrands shared by the free and harmonic flows (the potential enters c
// only through the (a, b) path): dc_R = a_I - b_R b_I, dc_I = -a_R + (b_R^2 - b_I^2)/2.
Complex c_rate(const GaussianParams& p) {
  return {p.a_I - p.b_R * p.b_I, -p.a_R + 0.5 * (p.b_R * p.b_R - p.b_I * p.b_I)};
}

// Integrate c along a closed-form path by composite trapezoid quadrature.
template <typename PathFn>
Complex integrate_c(const PathFn& ab_at, double t, int panels_per_unit_time) {
  if (t == 0.0) return {0.0, 0.0};
  const int n = std::max(10, static_cast<int>(std::ceil(panels_per_unit_time * std::abs(t))));
  std::vector<double> tau(n + 1), fr(n + 1), fi(n + 1);
  for (int k = 0; k <= n; ++k) {
    // sample on an increasing axis; for t < 0 integrate from t to 0 and negate
    const double s = (t > 0.0) ? t * k / n : t + (-t) * k / n;
    tau[k] = s;
    const Complex rate = c_rate(ab_at(s));
    fr[k] = rate.real();
    fi[k] = rate.imag();
  }
  Complex integral(quadrature_trapezoid(tau, fr), quadrature_trapezoid(tau, fi));
  return (t > 0.0) ? integral : -integral;
}

GaussianParams free_ab_at(const GaussianParams& p0, double t) {
  // a(t) = a / (1 + 2 i a t), b(t) = b / (1 + 2 i a t)
  const Complex den = 1.0 + 2.0 * Complex(0.0, 1.0) * p0.a() * t;
  const Complex at = p0.a() / den;
  const Complex bt = p0.b() / den;
  GaussianParams p = p0;
  p.a_R = at.real();
  p.a_I = at.imag();
  p.b_R = bt.real();
  p.b_I = bt.imag();
  return p;
}

GaussianParams harmonic_ab_at(const GaussianParams& p0, double omega, double t) {
  const Complex i(0.0, 1.0);
  const double c = std::cos(omega * t), s = std::sin(omega * t);
  const Complex den = omega * c + 2.0 * i * p0.a() * s;  // never zero when a_R > 0
  const Complex at = 0.5 * omega * (2.0 * p0.a() * c + i * omega * s) / den;
  const Complex bt = omega * p0.b() / den;
  GaussianParams p = p0;
  p.a_R = at.real();
  p.a_I = at.imag();
  p.b_R = bt.real();
  p.b_I = bt.imag();
  return p;
}

}  // namespace

GaussianParams free_closed_form(const GaussianParams& p0, double t, int panels_per_unit_time) {
  validate(p0);
  GaussianParams p = free_ab_at(p0, t);
  const Complex dc = integrate_c([&](double s) { return free_ab_at(p0, s); }, t,
                                 panels_per_unit_time);
  p.c_R = p0.c_R + dc.real();
  p.c_I = p0.c_I + dc.imag();
  return p;
}

GaussianParams harmonic_closed_form(const GaussianParams& p0, const ModelParams& m, double t,
                                    int panels_per_unit_time) {
  validate(p0);
  validate(m);
  if (!(m.omega > 0.0))
    throw std::domain_error("gaussian: harmonic closed form requires omega > 0");
  GaussianParams p = harmonic_ab_at(p0, m.omega, t);
  const Complex dc = integrate_c([&](double s) { return harmonic_ab_at(p0, m.omega, s); }, t,
                                 panels_per_unit_time);
  p.c_R = p0.c_R + dc.real();
  p.c_I = p0.c_I + dc.imag();
  return p;
}

DarbouxCoords to_darboux(const GaussianParams& p) {
  validate(p);
  const double rt = std::sqrt(p.a_R);
  return {p.b_R / (2.0 * p.a_R), (p.a_R * p.b_I - p.a_I * p.b_R) / p.a_R,
          1.0 / (2.0 * rt), -p.a_I / rt};
}

GaussianParams from_darboux(const DarbouxCoords& d, double c_R, double c_I) {
  if (!(d.q2 > 0.0)) throw std::domain_error("gaussian: q2 must be positive");
  GaussianParams p;
  p.a_R = 1.0 / (4.0 * d.q2 * d.q2);
  p.a_I = -d.p2 / (2.0 * d.q2);
  p.b_R = 2.0 * p.a_R * d.q1;
  p.b_I = d.p1 + p.a_I * p.b_R / p.a_R;
  p.c_R = c_R;
  p.c_I = c_I;
  return p;
}

std::array<std::array<double, 4>, 4> to_darboux_jacobian(const GaussianParams& p) {
  validate(p);
  const double aR = p.a_R, aI = p.a_I, bR = p.b_R;
  const double rt = std::sqrt(aR);
  std::array<std::array<double, 4>, 4> j{};
  // q1 = b_R/(2 a_R)
  j[0] = {-bR / (2.0 * aR * aR), 0.0, 1.0 / (2.0 * aR), 0.0};
  // p1 = b_I - a_I b_R / a_R
  j[1] = {aI * bR / (aR * aR), -bR / aR, -aI / aR, 1.0};
  // q2 = 1/(2 sqrt(a_R))
  j[2] = {-1.0 / (4.0 * aR * rt), 0.0, 0.0, 0.0};
  // p2 = -a_I / sqrt(a_R)
  j[3] = {0.5 * aI / (aR * rt), -1.0 / rt, 0.0, 0.0};
  return j;
}

std::array<double, 4> darboux_free_field(const DarbouxCoords& d) {
  if (!(d.q2 > 0.0)) throw std::domain_error("gaussian: q2 must be positive");
  const double q23 = d.q2 * d.q2 * d.q2;
  return {d.p1, 0.0, d.p2, 1.0 / (4.0 * q23)};
}

std::array<double, 4> darboux_harmonic_field(const DarbouxCoords& d, double omega) {
  std::array<double, 4> f = darboux_free_field(d);
  f[1] -= omega * omega * d.q1;
  f[3] -= omega * omega * d.q2;
  return f;
}

double darboux_free_h2(const DarbouxCoords& d) {
  return d.p2 * d.p2 + 1.0 / (4.0 * d.q2 * d.q2);
}

double darboux_harmonic_h1(const DarbouxCoords& d, double omega) {
  return d.p1 * d.p1 + omega * omega * d.q1 * d.q1;
}

double darboux_harmonic_h2(const DarbouxCoords& d, double omega) {
  return darboux_free_h2(d) + omega * omega * d.q2 * d.q2;
}

LinearizingVars to_linearizing(const GaussianParams& p, const ModelParams& m) {
  validate(p);
  if (!(m.omega > 0.0))
    throw std::domain_error("gaussian: linearizing variables require omega > 0");
  const Complex i(0.0, 1.0);
  const Complex den = m.omega + 2.0 * p.a();
  return {(p.b_I - i * p.b_R) / den, (m.omega - 2.0 * p.a()) / den};
}

namespace {

GaussianParams params_from6(const std::vector<double>& y) {
  return GaussianParams{y[0], y[1], y[2], y[3], y[4], y[5]};
}

}  // namespace

OdeProblem make_free_problem(const GaussianParams& p0) {
  validate(p0);
  OdeProblem prob;
  prob.dimension = 6;
  prob.t0 = 0.0;
  const auto v = p0.as_array();
  prob.y0.assign(v.begin(), v.end());
  prob.rhs = [](double, const std::vector<double>& y, std::vector<double>& dy) {
    const auto f = free_field(params_from6(y));
    std::copy(f.begin(), f.end(), dy.begin());
  };
  return prob;
}

OdeProblem make_harmonic_problem(const GaussianParams& p0, const ModelParams& m) {
  validate(m);
  OdeProblem prob = make_free_problem(p0);
  prob.rhs = [m](double, const std::vector<double>& y, std::vector<double>& dy) {
    const auto f = harmonic_field(params_from6(y), m);
    std::copy(f.begin(), f.end(), dy.begin());
  };
  return prob;
}

OdeProblem make_anharmonic_problem(const GaussianParams& p0, const ModelParams& m) {
  validate(p0);
  validate(m);
  OdeProblem prob;
  prob.dimension = 4;
  prob.t0 = 0.0;
  prob.y0 = {p0.a_R, p0.a_I, p0.b_R, p0.b_I};
  prob.rhs = [m](double, const std::vector<double>& y, std::vector<double>& dy) {
    const auto f = anharmonic_field(GaussianParams{y[0], y[1], y[2], y[3], 0.0, 0.0}, m);
    std::copy(f.begin(), f.end(), dy.begin());
  };
  return prob;
}

OdeProblem make_darboux_free_problem(const DarbouxCoords& d0) {
  OdeProblem prob;
  prob.dimension = 4;
  prob.t0 = 0.0;
  const auto v = d0.as_array();
  prob.y0.assign(v.begin(), v.end());
  prob.rhs = [](double, const std::vector<double>& y, std::vector<double>& dy) {
    const auto f = darboux_free_field(DarbouxCoords{y[0], y[1], y[2], y[3]});
    std::copy(f.begin(), f.end(), dy.begin());
  };
  return prob;
}

OdeProblem make_darboux_harmonic_problem(const DarbouxCoords& d0, double omega) {
  OdeProblem prob = make_darboux_free_problem(d0);
  prob.rhs = [omega](double, const std::vector<double>& y, std::vector<double>& dy) {
    const auto f = darboux_harmonic_field(DarbouxCoords{y[0], y[1], y[2], y[3]}, omega);
    std::copy(f.begin(), f.end(), dy.begin());
  };
  return prob;
}

}  // namespace varq::gaussian
