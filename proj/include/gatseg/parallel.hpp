#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace gatseg::par {

inline int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

inline void set_threads(int n) {
#ifdef _OPENMP
    if (n > 0) omp_set_num_threads(n);
#else
    (void)n;
#endif
}

// Deterministic parallel sum: fixed-size chunks produce partials that are
// merged in chunk order, so the result does not depend on the thread count.
template <class F>
double det_sum(int64_t n, F&& f) {
    constexpr int64_t kChunk = 4096;
    const int64_t nchunks = (n + kChunk - 1) / kChunk;
    if (nchunks <= 1) {
        double s = 0.0;
        for (int64_t i = 0; i < n; ++i) s += f(i);
        return s;
    }
    std::vector<double> partials(static_cast<size_t>(nchunks), 0.0);
#pragma omp parallel for schedule(static)
    for (int64_t c = 0; c < nchunks; ++c) {
        const int64_t lo = c * kChunk;
        const int64_t hi = std::min(n, lo + kChunk);
        double s = 0.0;
        for (int64_t i = lo; i < hi; ++i) s += f(i);
        partials[static_cast<size_t>(c)] = s;
    }
    double total = 0.0;
    for (double p : partials) total += p;
    return total;
}

} // namespace gatseg::par
