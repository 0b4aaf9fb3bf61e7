#pragma once

// Least-squares recovery of Gaussian parameters (a, b, c) from grid samples of
// psi(x) = exp(-a x^2 + b x + c), plus a residual that measures how far the
// sampled magnitude profile is from the best log-quadratic.  The residual is
// the fit diagnostic: tiny when the state is an exact Gaussian, order one when
// the profile has picked up non-quadratic structure.

#include "varq/gaussian.hpp"
#include "varq/grid.hpp"

namespace varq::fit {

struct GaussianFit {
    gaussian::GaussianParams params;
    // |psi|^2-weighted RMS deviation of log|psi_i| from the fitted quadratic
    // -a_R x^2 + b_R x + c_R over the support window.
    double residual = 0.0;
};

// Fit over the window |psi_i| > 1e-6 * max_i |psi_i|.  The quadratic
// coefficients come from a weighted linear least-squares fit of the
// logarithmic derivative psi'/psi against -2 a x + b (derivative by
// fourth-order finite differences), so no phase unwrapping is needed; c is
// read off afterwards from the weighted mean of log(psi) - (-a x^2 + b x).
// Throws std::domain_error when the window is too small or the fitted a_R
// is not positive.
GaussianFit fit_gaussian(const grid::GridWavefunction& psi);

}  // namespace varq::fit
