#pragma once

#include <cstdlib>

namespace nlhyp {

/// Runtime switch between the OpenMP kernels and the serial reference path.
/// Serial mode is forced by NLHYP_SERIAL=1 in the environment; tests use
/// set_parallel() to compare both paths on identical inputs.
bool parallel_enabled();
void set_parallel(bool on);

/// Parallel loop over independent outputs. Loops routed through here must not
/// carry reductions: every iteration writes disjoint locations, so serial and
/// parallel execution produce bit-identical results.
template <typename Fn>
void parallel_for(long n, Fn&& fn) {
#ifdef _OPENMP
    if (parallel_enabled()) {
#pragma omp parallel for schedule(static)
        for (long i = 0; i < n; ++i) fn(i);
        return;
    }
#endif
    for (long i = 0; i < n; ++i) fn(i);
}

} // namespace nlhyp
