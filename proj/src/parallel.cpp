#include "varq/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace varq::par {

namespace {

int initial_cap() {
    if (const char* env = std::getenv("VARQ_THREADS")) {
        int n = std::atoi(env);
        if (n >= 1) return n;
    }
#ifdef _OPENMP
    return std::max(1, omp_get_max_threads());
#else
    return 1;
#endif
}

std::atomic<int>& cap() {
    static std::atomic<int> value{initial_cap()};
    return value;
}

}  // namespace

int max_threads() { return cap().load(); }

int set_max_threads(int n) { return cap().exchange(std::max(1, n)); }

bool openmp_enabled() {
#ifdef _OPENMP
    return true;
#else
    return false;
#endif
}

namespace detail {

void run_indexed(std::size_t n, void* ctx, void (*body)(void*, std::size_t)) {
    constexpr std::size_t kGrain = 256;
#ifdef _OPENMP
    const int threads = max_threads();
    if (threads > 1 && n >= kGrain) {
#pragma omp parallel for num_threads(threads) schedule(static)
        for (long long i = 0; i < static_cast<long long>(n); ++i)
            body(ctx, static_cast<std::size_t>(i));
        return;
    }
#else
    (void)kGrain;
#endif
    for (std::size_t i = 0; i < n; ++i) body(ctx, i);
}

}  // namespace detail

}  // namespace varq::par
