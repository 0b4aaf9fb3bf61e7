#pragma once

// Reference quantum evolution on a uniform periodic 1-D grid: Strang split-step
// Fourier propagation for H = p^2/2 + V(x), free-particle Green-function
// propagation, fidelity scoring against Gaussian parameters, and the
// parallel-transport (dynamical + geometric) phase of a sampled trajectory.
// Units: hbar = m = 1.

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "varq/common.hpp"
#include "varq/gaussian.hpp"

namespace varq::grid {

struct SpatialGrid {
  double x_min = -20.0;
  double x_max = 20.0;
  std::size_t n_points = 2048;  // power of two, >= 16

  double length() const { return x_max - x_min; }
  double dx() const { return length() / static_cast<double>(n_points); }
  double x(std::size_t i) const { return x_min + dx() * static_cast<double>(i); }
  // FFT-ordered wavenumbers k_j = (2 pi / L) * j, j wrapped to (-n/2, n/2]
  std::vector<double> momenta() const;
};

void validate(const SpatialGrid& g);  // throws std::domain_error

struct GridWavefunction {
  SpatialGrid grid;
  ComplexVector samples;

  double norm_squared() const;  // trapezoid rule on the periodic extension
  GridWavefunction normalized() const;
};

// Sample exp(-a x^2 + b x + c) on the grid (no normalization applied).
GridWavefunction sample_gaussian(const SpatialGrid& g, const gaussian::GaussianParams& p);

// Trapezoid inner product, conjugate-linear in the first argument.
Complex inner(const GridWavefunction& u, const GridWavefunction& v);
double l2_distance(const GridWavefunction& u, const GridWavefunction& v);

// |psi|^2 mass in the outer 5% of the grid on each side.
double boundary_mass(const GridWavefunction& psi);

double mean_x(const GridWavefunction& psi);
double mean_x2(const GridWavefunction& psi);
double mean_p2(const GridWavefunction& psi);  // spectral (Parseval)

// H = -1/2 d^2/dx^2 + V(x) with the kinetic part applied in momentum space.
// Caches the FFT plans and the sampled potential, so one instance can be
// applied many times cheaply.  A single instance is not thread-safe (shared
// transform buffer); create one per thread if needed.
class SpectralHamiltonian {
  public:
    SpectralHamiltonian(const SpatialGrid& g, const std::function<double(double)>& potential);

    ComplexVector apply(const ComplexVector& samples) const;
    GridWavefunction operator()(const GridWavefunction& psi) const;

    const SpatialGrid& grid() const;

  private:
    struct Impl;
    std::shared_ptr<Impl> impl_;
};

// One-shot convenience wrapper around SpectralHamiltonian.
GridWavefunction apply_hamiltonian(const GridWavefunction& psi,
                                   const std::function<double(double)>& potential);

struct EvolveResult {
  std::vector<double> times;
  std::vector<GridWavefunction> states;
  std::vector<std::string> warnings;  // boundary-mass reports per stored time
};

// Strang splitting exp(-i V dt/2) exp(-i T dt) exp(-i V dt/2); unitary per step
// to round-off.  States are stored every `stride` steps and at t_end (final
// step shortened if needed).  A stored state whose boundary mass exceeds
// 1e-12 of its norm appends a warning naming the time and the leaked mass.
EvolveResult split_step_evolve(const GridWavefunction& psi0,
                               const std::function<double(double)>& potential, double dt,
                               double t_end, std::size_t stride = 1);

// Free-particle propagation by direct convolution with
// G(x, x', t) = exp(i (x - x')^2 / (2t)) / sqrt(2 pi i t).
// Throws std::domain_error when |t| < 1e-6 (kernel too singular for the grid).
GridWavefunction green_propagate_free(const GridWavefunction& psi0, double t);

// |<psi, psi(a,b,c)>|^2 with the Gaussian normalized via its c_R gauge.
// psi itself must be normalized to 1e-8 (std::domain_error otherwise).
double fidelity(const GridWavefunction& psi, const gaussian::GaussianParams& p);

// Phase alpha(t) accumulated by the rule
//   d(alpha)/dt = Re[ <psi, i dpsi/dt - H psi> ] / <psi, psi>,
// with dpsi/dt by central differences on the stored samples (second-order
// one-sided stencils at the ends).  Applying exp(i alpha(t)) to psi(t) removes
// the component of the Schrodinger residual along psi.  Needs >= 3 samples.
std::vector<double> parallel_transport_phase(
    const std::vector<double>& times, const std::vector<GridWavefunction>& states,
    const std::function<GridWavefunction(const GridWavefunction&)>& ham);

}  // namespace varq::grid
