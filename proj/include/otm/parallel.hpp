#pragma once

#include <omp.h>

#include <cstddef>

namespace otm {

/// jobs <= 0 selects hardware concurrency; jobs == 1 is the serial
/// reference path.
inline int resolve_jobs(int jobs) {
    if (jobs <= 0) return omp_get_max_threads();
    return jobs;
}

/// Serial reference kernel: plain index loop.
template <class F>
void for_each_index_serial(size_t n, F&& f) {
    for (size_t i = 0; i < n; ++i) f(i);
}

/// OpenMP kernel.  Every iteration writes only to its own slot, so the
/// result is identical to the serial path for any thread count.
template <class F>
void for_each_index_omp(size_t n, int threads, F&& f) {
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
    for (long long i = 0; i < (long long)n; ++i) f(size_t(i));
}

template <class F>
void for_each_index(size_t n, int jobs, F&& f) {
    jobs = resolve_jobs(jobs);
    if (jobs == 1) {
        for_each_index_serial(n, f);
    } else {
        for_each_index_omp(n, jobs, f);
    }
}

}  // namespace otm
