#include "varq/grid.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <stdexcept>

#include "varq/parallel.hpp"
#include "varq/quadrature.hpp"

namespace varq::grid {

namespace {

// FFTW plan creation/destruction is not thread-safe; executions are.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

// In-place FFT pair over a reusable buffer.
class FftPair {
 public:
  explicit FftPair(std::size_t n) {
    buf_ = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
    std::lock_guard<std::mutex> lock(planner_mutex());
    fwd_ = fftw_plan_dft_1d(static_cast<int>(n), buf_, buf_, FFTW_FORWARD, FFTW_ESTIMATE);
    bwd_ = fftw_plan_dft_1d(static_cast<int>(n), buf_, buf_, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  ~FftPair() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(bwd_);
    fftw_free(buf_);
  }
  FftPair(const FftPair&) = delete;
  FftPair& operator=(const FftPair&) = delete;

  Complex* data() { return reinterpret_cast<Complex*>(buf_); }
  void forward() { fftw_execute(fwd_); }
  void backward() { fftw_execute(bwd_); }  // unnormalized: scale by 1/n afterwards

 private:
  fftw_complex* buf_;
  fftw_plan fwd_, bwd_;
};

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::vector<double> trapezoid_weights(const SpatialGrid& g) {
  // periodic extension: every sample carries weight dx
  return std::vector<double>(g.n_points, g.dx());
}

void check_same_grid(const GridWavefunction& u, const GridWavefunction& v) {
  if (u.grid.n_points != v.grid.n_points || u.grid.x_min != v.grid.x_min ||
      u.grid.x_max != v.grid.x_max)
    throw std::invalid_argument("grid: wavefunctions live on different grids");
}

}  // namespace

std::vector<double> SpatialGrid::momenta() const {
  const double dk = 2.0 * kPi / length();
  std::vector<double> k(n_points);
  const std::size_t half = n_points / 2;
  for (std::size_t j = 0; j < n_points; ++j) {
    const auto sj = static_cast<long long>(j);
    k[j] = dk * static_cast<double>(j <= half ? sj : sj - static_cast<long long>(n_points));
  }
  return k;
}

void validate(const SpatialGrid& g) {
  if (!(g.x_max > g.x_min)) throw std::domain_error("grid: x_max must exceed x_min");
  if (g.n_points < 16 || !is_power_of_two(g.n_points))
    throw std::domain_error("grid: n_points must be a power of two, at least 16");
}

double GridWavefunction::norm_squared() const {
  const double dx = grid.dx();
  double s = 0.0;
  for (const Complex& v : samples) s += std::norm(v);
  return s * dx;
}

GridWavefunction GridWavefunction::normalized() const {
  GridWavefunction out = *this;
  const double scale = 1.0 / std::sqrt(norm_squared());
  for (Complex& v : out.samples) v *= scale;
  return out;
}

GridWavefunction sample_gaussian(const SpatialGrid& g, const gaussian::GaussianParams& p) {
  validate(g);
  gaussian::validate(p);
  GridWavefunction psi{g, ComplexVector(g.n_points)};
  par::parallel_for(g.n_points, [&](std::size_t i) { psi.samples[i] = p.evaluate(g.x(i)); });
  return psi;
}

Complex inner(const GridWavefunction& u, const GridWavefunction& v) {
  check_same_grid(u, v);
  Complex s = 0.0;
  for (std::size_t i = 0; i < u.samples.size(); ++i)
    s += std::conj(u.samples[i]) * v.samples[i];
  return s * u.grid.dx();
}

double l2_distance(const GridWavefunction& u, const GridWavefunction& v) {
  check_same_grid(u, v);
  double s = 0.0;
  for (std::size_t i = 0; i < u.samples.size(); ++i)
    s += std::norm(u.samples[i] - v.samples[i]);
  return std::sqrt(s * u.grid.dx());
}

double boundary_mass(const GridWavefunction& psi) {
  const std::size_t n = psi.grid.n_points;
  const std::size_t edge = std::max<std::size_t>(1, n / 20);
  double s = 0.0;
  for (std::size_t i = 0; i < edge; ++i) s += std::norm(psi.samples[i]);
  for (std::size_t i = n - edge; i < n; ++i) s += std::norm(psi.samples[i]);
  return s * psi.grid.dx();
}

double mean_x(const GridWavefunction& psi) {
  double s = 0.0, n = 0.0;
  for (std::size_t i = 0; i < psi.samples.size(); ++i) {
    const double d = std::norm(psi.samples[i]);
    s += d * psi.grid.x(i);
    n += d;
  }
  return s / n;
}

double mean_x2(const GridWavefunction& psi) {
  double s = 0.0, n = 0.0;
  for (std::size_t i = 0; i < psi.samples.size(); ++i) {
    const double d = std::norm(psi.samples[i]);
    const double x = psi.grid.x(i);
    s += d * x * x;
    n += d;
  }
  return s / n;
}

double mean_p2(const GridWavefunction& psi) {
  const std::size_t n = psi.grid.n_points;
  FftPair fft(n);
  std::copy(psi.samples.begin(), psi.samples.end(), fft.data());
  fft.forward();
  const auto k = psi.grid.momenta();
  double s = 0.0, tot = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double d = std::norm(fft.data()[j]);
    s += k[j] * k[j] * d;
    tot += d;
  }
  return s / tot;
}

struct SpectralHamiltonian::Impl {
  SpatialGrid grid;
  std::vector<double> v;         // sampled potential
  std::vector<double> half_k2;   // k^2 / 2, FFT ordering
  mutable FftPair fft;

  Impl(const SpatialGrid& g, const std::function<double(double)>& potential)
      : grid(g), v(g.n_points), half_k2(g.n_points), fft(g.n_points) {
    for (std::size_t i = 0; i < g.n_points; ++i) v[i] = potential(g.x(i));
    const auto k = g.momenta();
    for (std::size_t j = 0; j < g.n_points; ++j) half_k2[j] = 0.5 * k[j] * k[j];
  }
};

SpectralHamiltonian::SpectralHamiltonian(const SpatialGrid& g,
                                         const std::function<double(double)>& potential) {
  validate(g);
  impl_ = std::make_shared<Impl>(g, potential);
}

const SpatialGrid& SpectralHamiltonian::grid() const { return impl_->grid; }

ComplexVector SpectralHamiltonian::apply(const ComplexVector& samples) const {
  const std::size_t n = impl_->grid.n_points;
  if (samples.size() != n)
    throw std::invalid_argument("grid: sample count does not match the grid");
  std::copy(samples.begin(), samples.end(), impl_->fft.data());
  impl_->fft.forward();
  for (std::size_t j = 0; j < n; ++j) impl_->fft.data()[j] *= impl_->half_k2[j];
  impl_->fft.backward();
  ComplexVector out(n);
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i)
    out[i] = impl_->fft.data()[i] * inv_n + impl_->v[i] * samples[i];
  return out;
}

GridWavefunction SpectralHamiltonian::operator()(const GridWavefunction& psi) const {
  return GridWavefunction{psi.grid, apply(psi.samples)};
}

GridWavefunction apply_hamiltonian(const GridWavefunction& psi,
                                   const std::function<double(double)>& potential) {
  return SpectralHamiltonian(psi.grid, potential)(psi);
}

EvolveResult split_step_evolve(const GridWavefunction& psi0,
                               const std::function<double(double)>& potential, double dt,
                               double t_end, std::size_t stride) {
  validate(psi0.grid);
  if (!(dt > 0.0)) throw std::invalid_argument("grid: dt must be positive");
  if (!(t_end > 0.0)) throw std::invalid_argument("grid: t_end must be positive");
  if (stride == 0) stride = 1;
  const std::size_t n = psi0.grid.n_points;

  std::vector<double> v(n), k2(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = potential(psi0.grid.x(i));
  const auto k = psi0.grid.momenta();
  for (std::size_t j = 0; j < n; ++j) k2[j] = 0.5 * k[j] * k[j];

  FftPair fft(n);
  ComplexVector state = psi0.samples;

  EvolveResult result;
  auto store = [&](double t) {
    GridWavefunction snap{psi0.grid, state};
    result.times.push_back(t);
    const double leaked = boundary_mass(snap);
    if (leaked > 1e-12 * snap.norm_squared()) {
      char msg[128];
      std::snprintf(msg, sizeof(msg), "boundary mass %.3e at t = %.6g", leaked, t);
      result.warnings.emplace_back(msg);
    }
    result.states.push_back(std::move(snap));
  };

  auto do_step = [&](double h) {
    // half potential kick
    par::parallel_for(n, [&](std::size_t i) {
      state[i] *= std::exp(Complex(0.0, -0.5 * h * v[i]));
    });
    // full kinetic step in momentum space
    std::copy(state.begin(), state.end(), fft.data());
    fft.forward();
    Complex* f = fft.data();
    par::parallel_for(n, [&](std::size_t j) { f[j] *= std::exp(Complex(0.0, -h * k2[j])); });
    fft.backward();
    const double inv_n = 1.0 / static_cast<double>(n);
    par::parallel_for(n, [&](std::size_t i) { state[i] = f[i] * inv_n; });
    // half potential kick
    par::parallel_for(n, [&](std::size_t i) {
      state[i] *= std::exp(Complex(0.0, -0.5 * h * v[i]));
    });
  };

  store(0.0);
  double t = 0.0;
  std::size_t step = 0;
  const double t_eps = 1e-12 * std::max(1.0, std::abs(t_end));
  while (t < t_end - t_eps) {
    const double h = std::min(dt, t_end - t);
    do_step(h);
    t += h;
    ++step;
    if (step % stride == 0 || t >= t_end - t_eps) store(t);
  }
  return result;
}

GridWavefunction green_propagate_free(const GridWavefunction& psi0, double t) {
  validate(psi0.grid);
  if (std::abs(t) < 1e-6)
    throw std::domain_error("grid: |t| < 1e-6 is too singular for Green propagation");
  const std::size_t n = psi0.grid.n_points;
  const Complex prefactor = 1.0 / std::sqrt(Complex(0.0, 2.0 * kPi * t));
  const double inv_2t = 0.5 / t;

  GridWavefunction out{psi0.grid, ComplexVector(n)};
  const auto w = trapezoid_weights(psi0.grid);
  par::parallel_for(n, [&](std::size_t i) {
    const double xi = psi0.grid.x(i);
    Complex acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double d = xi - psi0.grid.x(j);
      acc += std::exp(Complex(0.0, d * d * inv_2t)) * psi0.samples[j] * w[j];
    }
    out.samples[i] = prefactor * acc;
  });
  return out;
}

double fidelity(const GridWavefunction& psi, const gaussian::GaussianParams& p) {
  if (std::abs(psi.norm_squared() - 1.0) > 1e-8)
    throw std::domain_error("grid: fidelity requires a normalized wavefunction");
  const GridWavefunction ref = sample_gaussian(psi.grid, p.normalized());
  return std::norm(inner(psi, ref));
}

std::vector<double> parallel_transport_phase(
    const std::vector<double>& times, const std::vector<GridWavefunction>& states,
    const std::function<GridWavefunction(const GridWavefunction&)>& ham) {
  if (times.size() != states.size())
    throw std::invalid_argument("grid: times/states size mismatch");
  const std::size_t m = times.size();
  if (m < 3) throw std::invalid_argument("grid: need at least 3 trajectory samples");

  auto derivative_at = [&](std::size_t k) {
    const std::size_t n = states[k].samples.size();
    GridWavefunction d{states[k].grid, ComplexVector(n)};
    if (k == 0) {
      const double h = times[1] - times[0];
      for (std::size_t i = 0; i < n; ++i)
        d.samples[i] = (-3.0 * states[0].samples[i] + 4.0 * states[1].samples[i] -
                        states[2].samples[i]) /
                       (2.0 * h);
    } else if (k == m - 1) {
      const double h = times[m - 1] - times[m - 2];
      for (std::size_t i = 0; i < n; ++i)
        d.samples[i] = (3.0 * states[m - 1].samples[i] - 4.0 * states[m - 2].samples[i] +
                        states[m - 3].samples[i]) /
                       (2.0 * h);
    } else {
      const double h2 = times[k + 1] - times[k - 1];
      for (std::size_t i = 0; i < n; ++i)
        d.samples[i] = (states[k + 1].samples[i] - states[k - 1].samples[i]) / h2;
    }
    return d;
  };

  std::vector<double> rate(m);
  for (std::size_t k = 0; k < m; ++k) {
    const GridWavefunction dpsi = derivative_at(k);
    const GridWavefunction hpsi = ham(states[k]);
    const Complex i_dpsi = Complex(0.0, 1.0) * inner(states[k], dpsi);
    const Complex h_term = inner(states[k], hpsi);
    rate[k] = (i_dpsi - h_term).real() / states[k].norm_squared();
  }
  return cumulative_trapezoid(times, rate);
}

}  // namespace varq::grid
