#include "varq/fit.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <vector>

namespace varq::fit {

GaussianFit fit_gaussian(const grid::GridWavefunction& psi) {
    grid::validate(psi.grid);
    const std::size_t n = psi.grid.n_points;

    double peak = 0.0;
    for (const Complex& v : psi.samples) peak = std::max(peak, std::abs(v));
    if (peak == 0.0) throw std::domain_error("fit: wavefunction is identically zero");
    const double cutoff = 1e-6 * peak;

    // Support window, shrunk by two samples on each side so the fourth-order
    // derivative stencil stays inside it.
    std::size_t lo = 0, hi = n;
    while (lo < n && std::abs(psi.samples[lo]) <= cutoff) ++lo;
    while (hi > lo && std::abs(psi.samples[hi - 1]) <= cutoff) --hi;
    lo += 2;
    hi = (hi >= 2) ? hi - 2 : 0;
    if (hi <= lo || hi - lo < 8)
        throw std::domain_error("fit: support window too small for a Gaussian fit");

    const double dx = psi.grid.dx();
    // psi'/psi ~ -2 a x + b: weighted complex least squares with weight |psi|^2.
    // Normal equations for the design matrix [x, 1] are real s.p.d. 2x2.
    Eigen::Matrix2d ata = Eigen::Matrix2d::Zero();
    Eigen::Vector2cd atb = Eigen::Vector2cd::Zero();
    for (std::size_t i = lo; i < hi; ++i) {
        const Complex dpsi = (-psi.samples[i + 2] + 8.0 * psi.samples[i + 1] -
                              8.0 * psi.samples[i - 1] + psi.samples[i - 2]) /
                             (12.0 * dx);
        const Complex ratio = dpsi / psi.samples[i];
        const double w = std::norm(psi.samples[i]);
        const double x = psi.grid.x(i);
        ata(0, 0) += w * x * x;
        ata(0, 1) += w * x;
        ata(1, 1) += w;
        atb(0) += w * x * ratio;
        atb(1) += w * ratio;
    }
    ata(1, 0) = ata(0, 1);
    const Eigen::Matrix2cd atac = ata.cast<Complex>();
    const Eigen::Vector2cd coef = atac.ldlt().solve(atb);
    const Complex a = -0.5 * coef(0);
    const Complex b = coef(1);
    if (!(a.real() > 0.0))
        throw std::domain_error("fit: recovered quadratic is not concave (a_R <= 0)");

    // c from a single weighted log: log of the weighted mean of psi * exp(a x^2 - b x).
    Complex num = 0.0;
    double den = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
        const double w = std::norm(psi.samples[i]);
        const double x = psi.grid.x(i);
        num += w * psi.samples[i] * std::exp(a * x * x - b * x);
        den += w;
    }
    const Complex c = std::log(num / den);

    // Residual: weighted RMS of log|psi| against the fitted real quadratic.
    double rss = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
        const double w = std::norm(psi.samples[i]);
        const double x = psi.grid.x(i);
        const double model = -a.real() * x * x + b.real() * x + c.real();
        const double diff = std::log(std::abs(psi.samples[i])) - model;
        rss += w * diff * diff;
    }

    GaussianFit out;
    out.params = gaussian::GaussianParams{a.real(), a.imag(), b.real(),
                                          b.imag(), c.real(), c.imag()};
    out.residual = std::sqrt(rss / den);
    return out;
}

}  // namespace varq::fit
