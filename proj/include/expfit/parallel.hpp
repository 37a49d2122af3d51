#pragma once

#include <atomic>
#include <cstddef>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace expfit::par {

namespace detail {
inline std::atomic<int>& thread_setting() {
  static std::atomic<int> n{0};  // 0 = runtime default
  return n;
}
}  // namespace detail

/// Sets the worker count for all expfit parallel loops (0 restores the OpenMP
/// runtime default). Results are independent of this setting by construction:
/// loop bodies only write their own slot and reductions run serially.
inline void set_threads(int n) { detail::thread_setting().store(n < 0 ? 0 : n); }

inline int threads() {
  int n = detail::thread_setting().load();
#ifdef _OPENMP
  if (n == 0) n = omp_get_max_threads();
#else
  if (n == 0) n = 1;
#endif
  return n;
}

/// Parallel loop over [0, n). body(i) must touch only state owned by index i.
template <typename Body>
void parallel_for(std::size_t n, Body&& body) {
#ifdef _OPENMP
  const int nt = threads();
  if (nt > 1 && n > 1) {
#pragma omp parallel for schedule(static) num_threads(nt)
    for (long long i = 0; i < static_cast<long long>(n); ++i) {
      body(static_cast<std::size_t>(i));
    }
    return;
  }
#endif
  for (std::size_t i = 0; i < n; ++i) body(i);
}

}  // namespace expfit::par
