#include "varq/fock.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace varq::fock {

namespace {

constexpr Complex kI{0.0, 1.0};

void check_cutoff(int cutoff) {
    if (cutoff < 1) throw std::invalid_argument("fock: cutoff must be >= 1");
}

double checked_mode(const ModeFunction& f, int n) {
    const double v = f(n);
    if (!(v > 0.0))
        throw std::invalid_argument("fock: mode function must be positive, got f(" +
                                    std::to_string(n) + ") = " + std::to_string(v));
    return v;
}

// Unnormalized coefficients z^n / (sqrt(n!) [f(n)]!), built iteratively so the
// partial products never overflow for moderate |z| and cutoff.
ComplexVector series_coefficients(Complex z, const ModeFunction& f, int cutoff) {
    ComplexVector c(static_cast<std::size_t>(cutoff) + 1);
    c[0] = Complex{1.0, 0.0};
    for (int n = 1; n <= cutoff; ++n)
        c[n] = c[n - 1] * z / (std::sqrt(static_cast<double>(n)) * checked_mode(f, n));
    return c;
}

void normalize_in_place(ComplexVector& c, const char* who) {
    const double n2 = norm_sq(c);
    if (n2 < 1e-300) throw std::domain_error(std::string(who) + ": zero state");
    const double inv = 1.0 / std::sqrt(n2);
    for (Complex& x : c) x *= inv;
}

void check_tail(const ComplexVector& c, int cutoff, int span, const char* who) {
    // `span` trailing coefficients are inspected so that parity states (whose
    // very last coefficient can vanish identically) are still caught.
    double worst = 0.0;
    for (int k = 0; k < span && k <= cutoff; ++k)
        worst = std::max(worst, std::norm(c[static_cast<std::size_t>(cutoff - k)]));
    if (worst >= kTailTolerance) {
        char buf[160];
        std::snprintf(buf, sizeof(buf),
                      "%s: truncation tail |c_N|^2 = %.3e exceeds %.1e at cutoff N = %d; "
                      "increase the cutoff or reduce |z|",
                      who, worst, kTailTolerance, cutoff);
        throw std::domain_error(buf);
    }
}

}  // namespace

ModeFunction unit_mode() {
    return [](int) { return 1.0; };
}

double FockState::norm() const { return std::sqrt(norm_sq(coefficients)); }

FockState FockState::normalized() const {
    FockState out = *this;
    normalize_in_place(out.coefficients, "FockState::normalized");
    return out;
}

Complex overlap(const FockState& a, const FockState& b) {
    if (a.cutoff != b.cutoff)
        throw std::invalid_argument("fock::overlap: cutoff mismatch");
    return inner_product(a.coefficients, b.coefficients);
}

FockState bosonic_coherent_state(Complex z, int cutoff) {
    check_cutoff(cutoff);
    FockState s{cutoff, series_coefficients(-std::conj(z), unit_mode(), cutoff)};
    normalize_in_place(s.coefficients, "bosonic_coherent_state");
    check_tail(s.coefficients, cutoff, 1, "bosonic_coherent_state");
    return s;
}

FockState f_oscillator_state(Complex z, const ModeFunction& f, int cutoff) {
    check_cutoff(cutoff);
    FockState s{cutoff, series_coefficients(z, f, cutoff)};
    normalize_in_place(s.coefficients, "f_oscillator_state");
    check_tail(s.coefficients, cutoff, 1, "f_oscillator_state");
    return s;
}

std::vector<double> f_oscillator_energies(const ModeFunction& f, double coupling_a,
                                          double coupling_b, int cutoff) {
    check_cutoff(cutoff);
    std::vector<double> e(static_cast<std::size_t>(cutoff) + 1);
    // f(n)^2 tabulated once; index n runs 0..cutoff+1 with f(0) unused.
    std::vector<double> f2(static_cast<std::size_t>(cutoff) + 2, 0.0);
    for (int n = 1; n <= cutoff + 1; ++n) {
        const double v = checked_mode(f, n);
        f2[n] = v * v;
    }
    for (int n = 0; n <= cutoff; ++n)
        e[n] = 0.5 * (coupling_a + coupling_b) * n * f2[n] +
               0.5 * (coupling_a - coupling_b) * (n + 1) * f2[n + 1];
    return e;
}

FockState evolve_diagonal(const FockState& state, const std::vector<double>& energies,
                          double t) {
    if (energies.size() != state.coefficients.size())
        throw std::invalid_argument("fock::evolve_diagonal: spectrum size mismatch");
    FockState out = state;
    for (std::size_t n = 0; n < out.coefficients.size(); ++n)
        out.coefficients[n] *= std::exp(-kI * (energies[n] * t));
    return out;
}

FlowResult bosonic_flow(Complex z, double coupling_a, double coupling_b, double t) {
    return {z * std::exp(kI * (coupling_a * t)),
            -0.5 * (coupling_a - coupling_b) * t};
}

namespace {

// Overlap square |<w|_f, psi>|^2 with the f-state of label w, built without
// the admissibility gate: grid probes may wander into inadmissible labels and
// must simply score low, not abort the search.
double overlap_square(Complex w, const ModeFunction& f, int cutoff,
                      const ComplexVector& psi) {
    ComplexVector c = series_coefficients(w, f, cutoff);
    const double n2 = norm_sq(c);
    if (n2 < 1e-300) return 0.0;
    Complex acc{0.0, 0.0};
    for (std::size_t n = 0; n < c.size(); ++n) acc += std::conj(c[n]) * psi[n];
    return std::norm(acc) / n2;
}

}  // namespace

double f_leakage(Complex z, const ModeFunction& f, double coupling_a,
                 double coupling_b, double t, int cutoff, Complex* best_label) {
    const FockState initial = f_oscillator_state(z, f, cutoff);
    const std::vector<double> energies =
        f_oscillator_energies(f, coupling_a, coupling_b, cutoff);
    const FockState evolved = evolve_diagonal(initial, energies, t);
    const ComplexVector& psi = evolved.coefficients;

    const auto score = [&](Complex w) { return overlap_square(w, f, cutoff, psi); };

    // Coarse stage: 41 x 41 grid over the disc |w| <= 2|z|.
    const double radius = 2.0 * std::abs(z);
    Complex best_w{0.0, 0.0};
    double best = score(best_w);
    if (radius > 0.0) {
        constexpr int kGrid = 41;
        for (int i = 0; i < kGrid; ++i) {
            const double wr = radius * (2.0 * i / (kGrid - 1) - 1.0);
            for (int j = 0; j < kGrid; ++j) {
                const double wi = radius * (2.0 * j / (kGrid - 1) - 1.0);
                if (wr * wr + wi * wi > radius * radius) continue;
                const Complex w{wr, wi};
                const double v = score(w);
                if (v > best) {
                    best = v;
                    best_w = w;
                }
            }
        }
    }

    // Refinement: Newton steps on the overlap square with central-difference
    // gradient and Hessian; fall back to halved steps whenever a trial point
    // fails to improve.
    const double h = std::max(1e-5, 1e-6 * radius);
    for (int iter = 0; iter < 20; ++iter) {
        const double f00 = best;
        const double fpr = score(best_w + Complex{h, 0.0});
        const double fmr = score(best_w - Complex{h, 0.0});
        const double fpi = score(best_w + Complex{0.0, h});
        const double fmi = score(best_w - Complex{0.0, h});
        const double fpp = score(best_w + Complex{h, h});
        const double fpm = score(best_w + Complex{h, -h});
        const double fmp = score(best_w + Complex{-h, h});
        const double fmm = score(best_w + Complex{-h, -h});

        const double gr = (fpr - fmr) / (2.0 * h);
        const double gi = (fpi - fmi) / (2.0 * h);
        const double hrr = (fpr - 2.0 * f00 + fmr) / (h * h);
        const double hii = (fpi - 2.0 * f00 + fmi) / (h * h);
        const double hri = (fpp - fpm - fmp + fmm) / (4.0 * h * h);

        const double det = hrr * hii - hri * hri;
        Complex step;
        if (det > 0.0 && hrr < 0.0) {
            // Negative-definite Hessian: plain Newton step towards the maximum.
            step = Complex{-(hii * gr - hri * gi) / det, -(hrr * gi - hri * gr) / det};
        } else {
            // Indefinite curvature: steepest ascent scaled to a modest length.
            const double gn = std::hypot(gr, gi);
            if (gn < 1e-16) break;
            step = Complex{gr, gi} * (std::max(h, 0.1 * std::max(radius, 1.0)) / gn);
        }
        double scale_factor = 1.0;
        bool moved = false;
        for (int halve = 0; halve < 12; ++halve) {
            const Complex trial = best_w + scale_factor * step;
            const double v = score(trial);
            if (v > best) {
                best = v;
                best_w = trial;
                moved = true;
                break;
            }
            scale_factor *= 0.5;
        }
        if (!moved) break;
    }

    if (best_label != nullptr) *best_label = best_w;
    return std::clamp(1.0 - best, 0.0, 1.0);
}

FockState cat_state(Complex z, int parity, int cutoff) {
    if (parity != 1 && parity != -1)
        throw std::invalid_argument("fock::cat_state: parity must be +1 or -1");
    check_cutoff(cutoff);
    const ComplexVector plus = series_coefficients(-std::conj(z), unit_mode(), cutoff);
    FockState s{cutoff, ComplexVector(static_cast<std::size_t>(cutoff) + 1)};
    for (int n = 0; n <= cutoff; ++n) {
        // |z> + parity |-z>: coefficient (-z*)^n (1 + parity (-1)^n) / sqrt(n!).
        const double sign = (n % 2 == 0) ? 1.0 : -1.0;
        s.coefficients[n] = plus[n] * (1.0 + parity * sign);
    }
    if (std::sqrt(norm_sq(s.coefficients)) < 1e-14 * std::sqrt(norm_sq(plus)))
        throw std::domain_error(
            "fock::cat_state: the superposition vanishes (z = 0 with parity -1)");
    normalize_in_place(s.coefficients, "fock::cat_state");
    check_tail(s.coefficients, cutoff, 2, "fock::cat_state");
    return s;
}

}  // namespace varq::fock
