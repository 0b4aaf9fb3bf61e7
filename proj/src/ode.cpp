#include "varq/ode.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace varq {

namespace {

void check_inputs(const OdeProblem& problem, double t_end, double dt) {
    if (problem.dimension == 0) throw std::invalid_argument("ode: dimension must be positive");
    if (problem.y0.size() != problem.dimension)
        throw std::invalid_argument("ode: initial state size does not match dimension");
    if (!problem.rhs) throw std::invalid_argument("ode: right-hand side is not set");
    if (!(dt > 0.0)) throw std::invalid_argument("ode: dt must be positive");
    if (!(t_end > problem.t0)) throw std::invalid_argument("ode: t_end must exceed t0");
}

bool all_finite(const std::vector<double>& v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

[[noreturn]] void throw_non_finite(double t) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", t);
    throw std::runtime_error(std::string("ode: non-finite state at t = ") + buf);
}

}  // namespace

OdeSolution integrate_rk4(const OdeProblem& problem, double t_end, double dt,
                          std::size_t stride) {
    check_inputs(problem, t_end, dt);
    if (stride == 0) stride = 1;

    const std::size_t n = problem.dimension;
    std::vector<double> y = problem.y0;
    std::vector<double> k1(n), k2(n), k3(n), k4(n), tmp(n);

    OdeSolution out;
    out.times.push_back(problem.t0);
    out.states.push_back(y);

    double t = problem.t0;
    std::size_t step = 0;
    while (t < t_end - 1e-14 * std::max(1.0, std::abs(t_end))) {
        const double h = std::min(dt, t_end - t);

        problem.rhs(t, y, k1);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
        problem.rhs(t + 0.5 * h, tmp, k2);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
        problem.rhs(t + 0.5 * h, tmp, k3);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * k3[i];
        problem.rhs(t + h, tmp, k4);
        for (std::size_t i = 0; i < n; ++i)
            y[i] += (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);

        t += h;
        ++step;
        if (!all_finite(y)) throw_non_finite(t);

        const bool last = !(t < t_end - 1e-14 * std::max(1.0, std::abs(t_end)));
        if (step % stride == 0 || last) {
            out.times.push_back(last ? t_end : t);
            out.states.push_back(y);
        }
    }
    return out;
}

OdeSolution integrate_implicit_midpoint(const OdeProblem& problem, double t_end,
                                        double dt, std::size_t stride) {
    check_inputs(problem, t_end, dt);
    if (stride == 0) stride = 1;

    const std::size_t n = problem.dimension;
    std::vector<double> y = problem.y0;
    std::vector<double> z(n), znew(n), f(n);

    OdeSolution out;
    out.times.push_back(problem.t0);
    out.states.push_back(y);

    double t = problem.t0;
    std::size_t step = 0;
    while (t < t_end - 1e-14 * std::max(1.0, std::abs(t_end))) {
        const double h = std::min(dt, t_end - t);
        const double t_mid = t + 0.5 * h;

        // Fixed-point iteration for the midpoint state z.
        z = y;
        double delta = 0.0;
        double prev_delta = std::numeric_limits<double>::infinity();
        constexpr int kMaxIter = 50;
        int iter = 0;
        for (; iter < kMaxIter; ++iter) {
            problem.rhs(t_mid, z, f);
            delta = 0.0;
            double scale = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                znew[i] = y[i] + 0.5 * h * f[i];
                delta = std::max(delta, std::abs(znew[i] - z[i]));
                scale = std::max(scale, std::abs(znew[i]));
            }
            z.swap(znew);
            const double tol = 1e-15 * std::max(1.0, scale);
            if (delta <= tol) break;
            // Stalled at machine precision: further iterations cannot improve.
            if (delta >= prev_delta && delta <= 1e-12 * std::max(1.0, scale)) break;
            prev_delta = delta;
        }
        if (iter == kMaxIter && delta > 1e-12)
            throw std::runtime_error(
                "ode: implicit midpoint fixed-point iteration failed to converge");

        problem.rhs(t_mid, z, f);
        for (std::size_t i = 0; i < n; ++i) y[i] += h * f[i];

        t += h;
        ++step;
        if (!all_finite(y)) throw_non_finite(t);

        const bool last = !(t < t_end - 1e-14 * std::max(1.0, std::abs(t_end)));
        if (step % stride == 0 || last) {
            out.times.push_back(last ? t_end : t);
            out.states.push_back(y);
        }
    }
    return out;
}

}  // namespace varq
