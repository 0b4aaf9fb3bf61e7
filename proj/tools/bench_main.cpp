// Benchmark the OpenMP-parallel kernels against the serial reference path.
// The serial path is the same code with the thread cap set to 1, so the two
// must agree bit for bit; this tool reports timings and the residual between
// the two results as a sanity column.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <vector>

#include "varq/engine.hpp"
#include "varq/gaussian.hpp"
#include "varq/grid.hpp"
#include "varq/immersion.hpp"
#include "varq/parallel.hpp"

namespace {

using varq::Complex;

double now_seconds() {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

template <typename F>
double timed(F&& f, int repeats) {
    // One warm-up run (FFTW plans, page faults), then the best of `repeats`.
    f();
    double best = 1e300;
    for (int r = 0; r < repeats; ++r) {
        const double t0 = now_seconds();
        f();
        best = std::min(best, now_seconds() - t0);
    }
    return best;
}

struct BenchRow {
    const char* name;
    double serial;
    double parallel;
    double residual;
};

void print_rows(const std::vector<BenchRow>& rows) {
    std::printf("%-28s %12s %12s %9s %12s\n", "kernel", "serial [s]",
                "parallel [s]", "speedup", "max |diff|");
    for (const auto& row : rows) {
        std::printf("%-28s %12.4f %12.4f %8.2fx %12.3e\n", row.name, row.serial,
                    row.parallel, row.serial / row.parallel, row.residual);
    }
}

}  // namespace

int main() {
    using namespace varq;

    const int hw_threads = par::max_threads();
    std::printf("openmp enabled: %s, hardware threads: %d\n",
                par::openmp_enabled() ? "yes" : "no", hw_threads);

    std::vector<BenchRow> rows;

    // --- split-step propagation on a large grid -----------------------------
    {
        const grid::SpatialGrid g{-30.0, 30.0, 8192};
        const gaussian::GaussianParams p0{0.5, 0.0, 0.3, 0.2, 0.0, 0.0};
        const grid::GridWavefunction psi0 =
            grid::sample_gaussian(g, p0).normalized();
        const auto potential = [](double x) { return 0.5 * x * x; };

        grid::GridWavefunction out_serial = psi0, out_parallel = psi0;
        auto evolve = [&](grid::GridWavefunction& out) {
            out = grid::split_step_evolve(psi0, potential, 1e-3, 0.5, 500)
                      .states.back();
        };

        par::set_max_threads(1);
        const double t_serial = timed([&] { evolve(out_serial); }, 3);
        par::set_max_threads(hw_threads);
        const double t_parallel = timed([&] { evolve(out_parallel); }, 3);

        double residual = 0.0;
        for (std::size_t i = 0; i < out_serial.samples.size(); ++i) {
            residual = std::max(
                residual, std::abs(out_serial.samples[i] - out_parallel.samples[i]));
        }
        rows.push_back({"split-step (8192 pts)", t_serial, t_parallel, residual});
    }

    // --- two-form assembly through the variational engine -------------------
    {
        const grid::SpatialGrid g{-12.0, 12.0, 1024};
        const engine::Immersion im = engine::gaussian_grid_immersion(g);
        const std::vector<double> x{0.7, 0.2, 0.3, -0.1, 0.0, 0.0};

        engine::TwoForm tf_serial, tf_parallel;
        par::set_max_threads(1);
        const double t_serial =
            timed([&] { tf_serial = engine::lagrangian_two_form(im, x); }, 3);
        par::set_max_threads(hw_threads);
        const double t_parallel =
            timed([&] { tf_parallel = engine::lagrangian_two_form(im, x); }, 3);

        const double residual =
            (tf_serial.omega - tf_parallel.omega).cwiseAbs().maxCoeff();
        rows.push_back(
            {"two-form assembly (1024 pts)", t_serial, t_parallel, residual});
    }

    // --- reduced trajectory via the engine ----------------------------------
    {
        const grid::SpatialGrid g{-12.0, 12.0, 512};
        const engine::Immersion im = engine::gaussian_grid_immersion_ab(g);
        const engine::HamiltonianAction ham = engine::grid_hamiltonian(
            g, [](double x) { return 0.5 * x * x; }, "harmonic");
        const std::vector<double> x0{0.5, 0.0, 0.3, 0.2};

        engine::ReducedTrajectory tr_serial, tr_parallel;
        par::set_max_threads(1);
        const double t_serial = timed(
            [&] { tr_serial = engine::integrate_reduced(im, ham, x0, 0.02, 0.1); },
            2);
        par::set_max_threads(hw_threads);
        const double t_parallel = timed(
            [&] { tr_parallel = engine::integrate_reduced(im, ham, x0, 0.02, 0.1); },
            2);

        double residual = 0.0;
        for (std::size_t i = 0; i < tr_serial.points.size(); ++i) {
            for (std::size_t j = 0; j < tr_serial.points[i].size(); ++j) {
                residual = std::max(residual,
                                    std::abs(tr_serial.points[i][j] -
                                             tr_parallel.points[i][j]));
            }
        }
        rows.push_back(
            {"engine trajectory (512 pts)", t_serial, t_parallel, residual});
    }

    par::set_max_threads(hw_threads);
    print_rows(rows);
    return 0;
}
