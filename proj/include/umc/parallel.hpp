#pragma once

#include <cstdint>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace umc {

/// Replication-level map kernels. fn(i) must be a pure function of the index
/// (each replication derives its own stream from i), so the parallel kernel
/// produces the same bytes as the serial reference for any worker count; all
/// reductions over the results happen afterwards, in index order.

template <class T, class Fn>
void indexed_map_serial(std::uint64_t first, std::uint64_t count, Fn&& fn, T* out) {
  for (std::uint64_t j = 0; j < count; ++j) {
    out[j] = fn(first + j);
  }
}

template <class T, class Fn>
void indexed_map_parallel(std::uint64_t first, std::uint64_t count, int workers,
                          Fn&& fn, T* out) {
#ifdef _OPENMP
  const long long n = static_cast<long long>(count);
  if (workers > 0) {
#pragma omp parallel for schedule(dynamic, 1) num_threads(workers)
    for (long long j = 0; j < n; ++j) {
      out[j] = fn(first + static_cast<std::uint64_t>(j));
    }
  } else {
#pragma omp parallel for schedule(dynamic, 1)
    for (long long j = 0; j < n; ++j) {
      out[j] = fn(first + static_cast<std::uint64_t>(j));
    }
  }
#else
  (void)workers;
  indexed_map_serial(first, count, fn, out);
#endif
}

/// workers == 1 selects the serial reference path.
template <class T, class Fn>
void indexed_map(std::uint64_t first, std::uint64_t count, int workers, Fn&& fn,
                 T* out) {
  if (workers == 1) {
    indexed_map_serial(first, count, fn, out);
  } else {
    indexed_map_parallel(first, count, workers, fn, out);
  }
}

inline int max_workers() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace umc
