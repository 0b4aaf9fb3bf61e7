#pragma once

// Gaussian (squeezed/correlated) wavepacket manifold psi(x) = exp(-a x^2 + b x + c),
// Re(a) > 0, with the reduced dynamics induced by free, harmonic and quartic
// Hamiltonians H = p^2/2 + V(x), V = (omega^2/2) x^2 + (lambda/2) x^4.
// Units: hbar = m = 1.
//
// Parameter order used for all 6-tuples: (a_R, a_I, b_R, b_I, c_R, c_I).
// The c components are gauge (normalization and global phase): they never feed
// back into the (a, b) dynamics.

#include <array>
#include <complex>

#include "varq/common.hpp"
#include "varq/ode.hpp"

namespace varq::gaussian {

struct ModelParams {
  double omega = 0.0;   // angular frequency of the quadratic term, >= 0
  double lambda = 0.0;  // quartic coupling, >= 0
};

struct GaussianParams {
  double a_R = 0.5, a_I = 0.0;
  double b_R = 0.0, b_I = 0.0;
  double c_R = 0.0, c_I = 0.0;

  Complex a() const { return {a_R, a_I}; }
  Complex b() const { return {b_R, b_I}; }
  Complex c() const { return {c_R, c_I}; }

  std::array<double, 6> as_array() const { return {a_R, a_I, b_R, b_I, c_R, c_I}; }
  static GaussianParams from_array(const std::array<double, 6>& v) {
    return {v[0], v[1], v[2], v[3], v[4], v[5]};
  }

  Complex evaluate(double x) const;  // exp(-a x^2 + b x + c)

  // integral of |psi|^2 over the real line: e^{2c_R} sqrt(pi/(2a_R)) e^{b_R^2/(2a_R)}
  double norm_squared() const;

  double mean_x() const { return b_R / (2.0 * a_R); }
  double var_x() const { return 1.0 / (4.0 * a_R); }
  double mean_x2() const { return mean_x() * mean_x() + var_x(); }
  double mean_p() const;   // <p> = b_I - 2 a_I <x>
  double mean_p2() const;  // <p^2> = 4|a|^2 <x^2> - 4 Re(a conj(b)) <x> + |b|^2

  // same state rescaled so that norm_squared() == 1 (c_R gauge shift)
  GaussianParams normalized() const;
};

// Throws std::domain_error unless a_R > 0 and all components are finite.
void validate(const GaussianParams& p);
void validate(const ModelParams& m);

// ---------------------------------------------------------------------------
// Reduced vector fields (tangent tuples in the parameter order above).
//
// free:      da_R = 4 a_R a_I            da_I = 2(a_I^2 - a_R^2)
//            db_R = 2(a_I b_R + a_R b_I) db_I = 2(a_I b_I - a_R b_R)
//            dc_R = a_I - b_R b_I        dc_I = -a_R + (b_R^2 - b_I^2)/2
// harmonic:  adds +omega^2/2 to da_I only; c integrands are unchanged.
// quartic:   adds 3 lambda (a_R + b_R^2)/(4 a_R^2) to da_I and
//            lambda b_R^3 / (2 a_R^3) to db_I; only (a, b) components returned.
// ---------------------------------------------------------------------------
std::array<double, 6> free_field(const GaussianParams& p);
std::array<double, 6> harmonic_field(const GaussianParams& p, const ModelParams& m);
std::array<double, 4> anharmonic_field(const GaussianParams& p, const ModelParams& m);

// Expectation value of the Hamiltonian on the normalized state:
//   E = a_R/2 + a_I^2/(2 a_R) + (a_I b_R - a_R b_I)^2/(2 a_R^2)
//     + omega^2/(8 a_R) + omega^2 b_R^2/(8 a_R^2)
//     + 3 lambda/(32 a_R^2) + 3 b_R^2 lambda/(16 a_R^3) + b_R^4 lambda/(32 a_R^4)
double anharmonic_energy(const GaussianParams& p, const ModelParams& m);
inline double free_energy(const GaussianParams& p) { return anharmonic_energy(p, ModelParams{}); }

// ---------------------------------------------------------------------------
// Closed-form solutions. a(t) and b(t) are rational in the initial data;
// c(t) is produced by trapezoid quadrature of the c integrands along the
// closed-form (a, b) path (panels_per_unit_time panels, default 1e4).
// ---------------------------------------------------------------------------
GaussianParams free_closed_form(const GaussianParams& p0, double t,
                                int panels_per_unit_time = 10000);
// Requires m.omega > 0.  The rational representation
//   a(t) = (omega/2) (2 a cos(omega t) + i omega sin(omega t)) / D(t),
//   b(t) = omega b / D(t),  D(t) = omega cos(omega t) + 2 i a sin(omega t)
// is regular for all t when a_R > 0 (|D| never vanishes), so the values at
// sin(omega t) = 0 are the built-in limits of the singular cot/csc expressions.
GaussianParams harmonic_closed_form(const GaussianParams& p0, const ModelParams& m, double t,
                                    int panels_per_unit_time = 10000);

// ---------------------------------------------------------------------------
// Darboux chart for the reduced two-form restricted to (a_R, a_I, b_R, b_I):
//   q1 = b_R/(2 a_R)   (mean position)         p1 = (a_R b_I - a_I b_R)/a_R
//   q2 = 1/(2 sqrt(a_R)) (packet half-width)   p2 = -a_I/sqrt(a_R)
// in which the two-form is dp1 ^ dq1 + dp2 ^ dq2.
// ---------------------------------------------------------------------------
struct DarbouxCoords {
  double q1 = 0.0, p1 = 0.0;
  double q2 = 1.0, p2 = 0.0;
  std::array<double, 4> as_array() const { return {q1, p1, q2, p2}; }
  static DarbouxCoords from_array(const std::array<double, 4>& v) {
    return {v[0], v[1], v[2], v[3]};
  }
};

DarbouxCoords to_darboux(const GaussianParams& p);
// Inverse on the (a, b) block; the gauge pair (c_R, c_I) is caller-supplied.
GaussianParams from_darboux(const DarbouxCoords& d, double c_R = 0.0, double c_I = 0.0);
// J[i][j] = d(q1,p1,q2,p2)_i / d(a_R,a_I,b_R,b_I)_j, row-major.
std::array<std::array<double, 4>, 4> to_darboux_jacobian(const GaussianParams& p);

// Hamilton equations in the Darboux chart.
// free:     dq1 = p1, dp1 = 0,           dq2 = p2, dp2 = 1/(4 q2^3)
// harmonic: dq1 = p1, dp1 = -omega^2 q1, dq2 = p2, dp2 = -omega^2 q2 + 1/(4 q2^3)
std::array<double, 4> darboux_free_field(const DarbouxCoords& d);
std::array<double, 4> darboux_harmonic_field(const DarbouxCoords& d, double omega);

// Conserved quantities of the Darboux dynamics.
double darboux_free_h2(const DarbouxCoords& d);                    // p2^2 + 1/(4 q2^2)
double darboux_harmonic_h1(const DarbouxCoords& d, double omega);  // p1^2 + omega^2 q1^2
double darboux_harmonic_h2(const DarbouxCoords& d, double omega);  // p2^2 + omega^2 q2^2 + 1/(4 q2^2)

// ---------------------------------------------------------------------------
// Linearizing complex chart for the harmonic reduced flow (omega > 0):
//   z = (b_I - i b_R)/(omega + 2(a_R + i a_I)),
//   u = (omega - 2(a_R + i a_I))/(omega + 2(a_R + i a_I)),
// which obey dz/dt = -i omega z and du/dt = -2 i omega u; |u| < 1 when a_R > 0.
// ---------------------------------------------------------------------------
struct LinearizingVars {
  Complex z;
  Complex u;
};
LinearizingVars to_linearizing(const GaussianParams& p, const ModelParams& m);

// ---------------------------------------------------------------------------
// OdeProblem adapters (t0 = 0).
// ---------------------------------------------------------------------------
OdeProblem make_free_problem(const GaussianParams& p0);
OdeProblem make_harmonic_problem(const GaussianParams& p0, const ModelParams& m);
// 4-dimensional (a, b) system; c is gauge and not integrated here.
OdeProblem make_anharmonic_problem(const GaussianParams& p0, const ModelParams& m);
OdeProblem make_darboux_free_problem(const DarbouxCoords& d0);
OdeProblem make_darboux_harmonic_problem(const DarbouxCoords& d0, double omega);

}  // namespace varq::gaussian
