#pragma once

// Truncated Fock-space states for a single bosonic mode: displacement
// coherent states, nonlinear f-oscillator coherent states, and even/odd cat
// superpositions, together with the diagonal-Hamiltonian evolution
//   H = ((A + B)/2) Af+ Af  +  ((A - B)/2) Af Af+,   Af = a f(n),
// whose spectrum is E_n = ((A+B)/2) n f(n)^2 + ((A-B)/2)(n+1) f(n+1)^2.
// States evolve by exp(-i H t).
//
// Truncation: a state at cutoff N is admissible when its normalized tail
// satisfies |c_N|^2 < 1e-10; the factories enforce this and throw otherwise.

#include <functional>
#include <vector>

#include "varq/common.hpp"

namespace varq::fock {

inline constexpr int kDefaultCutoff = 64;
inline constexpr double kTailTolerance = 1e-10;

// Occupation-number amplitude profile f(n), n >= 1, strictly positive.
using ModeFunction = std::function<double(int)>;

// f == 1: the ordinary oscillator.
ModeFunction unit_mode();

struct FockState {
    int cutoff = 0;               // highest retained occupation number N
    ComplexVector coefficients;   // size cutoff + 1, index = occupation number

    double norm() const;
    FockState normalized() const;
};

// <a|b> with the conjugate on the first argument.
Complex overlap(const FockState& a, const FockState& b);

// Displacement coherent state exp(z a - z* a+)|0>, i.e. coefficients
// proportional to (-z*)^n / sqrt(n!).  Normalized; tail-checked.
FockState bosonic_coherent_state(Complex z, int cutoff = kDefaultCutoff);

// Nonlinear coherent state |z>_f with coefficients proportional to
// z^n / (sqrt(n!) [f(n)]!), [f(n)]! = f(1) f(2) ... f(n).  Normalized;
// tail-checked.  Throws std::invalid_argument when f(n) <= 0.
FockState f_oscillator_state(Complex z, const ModeFunction& f,
                             int cutoff = kDefaultCutoff);

// E_n for n = 0..cutoff (see the header comment).
std::vector<double> f_oscillator_energies(const ModeFunction& f, double coupling_a,
                                          double coupling_b, int cutoff);

// c_n -> c_n exp(-i E_n t).
FockState evolve_diagonal(const FockState& state, const std::vector<double>& energies,
                          double t);

struct FlowResult {
    Complex z;           // transported label
    double phase = 0.0;  // exp(-i H t)|z> = e^{i phase} |z(t)>
};

// Label flow of the displacement family under exp(-i H t) with f == 1:
// z(t) = z e^{+i A t}, global phase -(A - B) t / 2.  Exact at infinite
// cutoff; truncation only perturbs it below the tail tolerance.
FlowResult bosonic_flow(Complex z, double coupling_a, double coupling_b, double t);

// 1 - max_w |<w|_f , exp(-iHt)|z>_f>|^2: how far the evolved state has left
// the f-family.  The maximum is located by a 41 x 41 grid over the disc
// |w| <= 2|z| followed by 20 Newton refinement steps on the overlap square
// (finite-difference derivatives, step-halving safeguard).  When best_label
// is non-null the maximizing w is written to it.
double f_leakage(Complex z, const ModeFunction& f, double coupling_a,
                 double coupling_b, double t, int cutoff = kDefaultCutoff,
                 Complex* best_label = nullptr);

// Even (parity +1) / odd (parity -1) superpositions |z> +- |-z> of the
// displacement coherent states, normalized numerically.  The even cat has
// only even occupation numbers, the odd cat only odd ones.  Throws
// std::domain_error when the superposition vanishes (z = 0, parity -1).
FockState cat_state(Complex z, int parity, int cutoff = kDefaultCutoff);

}  // namespace varq::fock
