#pragma once

// Fixed-step ODE integrators for real first-order systems y' = f(t, y).
//
// Two methods are provided:
//   - classic fourth-order Runge-Kutta (the workhorse), and
//   - the implicit midpoint rule (symplectic; preserves quadratic invariants
//     up to the fixed-point solve tolerance, which is driven to machine level).
//
// Both shorten the final step so the last sample lands exactly on t_end, and
// both abort with an exception naming the time at which a non-finite value
// first appeared.

#include <functional>
#include <vector>

namespace varq {

struct OdeProblem {
    // State dimension.
    std::size_t dimension = 0;
    // Right-hand side: fills dydt (already sized to dimension).
    std::function<void(double t, const std::vector<double>& y,
                       std::vector<double>& dydt)>
        rhs;
    double t0 = 0.0;
    std::vector<double> y0;
};

struct OdeSolution {
    std::vector<double> times;
    std::vector<std::vector<double>> states;

    const std::vector<double>& final_state() const { return states.back(); }
    double final_time() const { return times.back(); }
};

// Integrate with classic RK4 from problem.t0 to t_end with step dt (> 0).
// Samples are stored every `stride` steps (>= 1); the initial state and the
// final state (at exactly t_end) are always stored.
OdeSolution integrate_rk4(const OdeProblem& problem, double t_end, double dt,
                          std::size_t stride = 1);

// Integrate with the implicit midpoint rule.  Each step solves
//   z = y_n + (dt/2) f(t_n + dt/2, z)
// by fixed-point iteration, tightened until the update stalls at machine
// precision (cap 50 iterations; throws if the residual is still above 1e-12
// at the cap).
OdeSolution integrate_implicit_midpoint(const OdeProblem& problem, double t_end,
                                        double dt, std::size_t stride = 1);

}  // namespace varq
