#pragma once

#include <cstddef>

// Runtime-switchable OpenMP parallelism. Every parallel kernel in the library
// writes each output element independently of iteration order, so the serial
// path (max_threads() == 1) and the parallel path produce identical bytes.
// Reductions that feed persisted output always run serially.

namespace varq::par {

// Current thread cap. Defaults to OMP max threads (1 in a non-OpenMP build),
// overridable by the VARQ_THREADS environment variable at first use.
int max_threads();

// Set the cap; values < 1 are clamped to 1. Returns the previous cap.
int set_max_threads(int n);

bool openmp_enabled();

namespace detail {
void run_indexed(std::size_t n, void* ctx, void (*body)(void*, std::size_t));
}

// Calls f(i) for i in [0, n). Parallel when the cap allows and n is large
// enough to amortize thread startup; otherwise a plain loop.
template <class F>
void parallel_for(std::size_t n, F&& f) {
    detail::run_indexed(n, &f, [](void* ctx, std::size_t i) {
        (*static_cast<F*>(ctx))(i);
    });
}

}  // namespace varq::par
