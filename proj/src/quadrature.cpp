#include "varq/quadrature.hpp"

#include <stdexcept>

namespace varq {

namespace {

void check_samples(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() < 2) throw std::invalid_argument("quadrature: need at least two samples");
    if (x.size() != y.size())
        throw std::invalid_argument("quadrature: abscissa/ordinate size mismatch");
    for (std::size_t i = 1; i < x.size(); ++i)
        if (!(x[i] > x[i - 1]))
            throw std::invalid_argument("quadrature: abscissae must be strictly increasing");
}

}  // namespace

double quadrature_trapezoid(const std::vector<double>& x,
                            const std::vector<double>& y) {
    check_samples(x, y);
    double sum = 0.0;
    for (std::size_t i = 1; i < x.size(); ++i)
        sum += 0.5 * (x[i] - x[i - 1]) * (y[i] + y[i - 1]);
    return sum;
}

std::vector<double> cumulative_trapezoid(const std::vector<double>& x,
                                         const std::vector<double>& y) {
    check_samples(x, y);
    std::vector<double> out(x.size(), 0.0);
    for (std::size_t i = 1; i < x.size(); ++i)
        out[i] = out[i - 1] + 0.5 * (x[i] - x[i - 1]) * (y[i] + y[i - 1]);
    return out;
}

}  // namespace varq
