#pragma once

// Trapezoid quadrature over tabulated samples.  Used wherever an integral of
// sampled data is needed (accumulated phases, normalization constants, the
// c-parameter of Gaussian evolutions).

#include <vector>

namespace varq {

// Integral of y over x by the composite trapezoid rule.  Requires at least
// two samples, matching sizes, and strictly increasing x.
double quadrature_trapezoid(const std::vector<double>& x,
                            const std::vector<double>& y);

// Cumulative integral: out[k] = integral of y over [x[0], x[k]], out[0] = 0.
std::vector<double> cumulative_trapezoid(const std::vector<double>& x,
                                         const std::vector<double>& y);

}  // namespace varq
