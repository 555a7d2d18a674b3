#pragma once

#include <cstddef>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace loci {

/// Execution plan for the data-parallel inner loops (per try point, per
/// replication). The serial path is the reference implementation; the OpenMP
/// path must produce bit-identical results, which holds because every loop
/// iteration owns a pre-derived rng stream and writes only its own slot.
struct Exec {
    int threads = 1;  // 1 = serial reference; 0 = library default thread count

    bool serial() const { return threads == 1; }

    static Exec serial_ref() { return Exec{1}; }
    static Exec parallel(int threads = 0) { return Exec{threads}; }
};

/// Runs body(i) for i in [0, n). Iterations must be independent.
template <typename Body>
void parallel_for_index(std::size_t n, const Exec& exec, Body&& body) {
    if (exec.serial() || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
#ifdef _OPENMP
    if (exec.threads > 0) {
#pragma omp parallel for schedule(dynamic) num_threads(exec.threads)
        for (long long i = 0; i < static_cast<long long>(n); ++i)
            body(static_cast<std::size_t>(i));
    } else {
#pragma omp parallel for schedule(dynamic)
        for (long long i = 0; i < static_cast<long long>(n); ++i)
            body(static_cast<std::size_t>(i));
    }
#else
    for (std::size_t i = 0; i < n; ++i) body(i);
#endif
}

inline int hardware_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

}  // namespace loci
