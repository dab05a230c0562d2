#pragma once

#include <cstddef>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace irsched {

enum class Exec { Serial, Parallel };

/// Runs f(i) for i in [0, n). The parallel path writes through the index
/// only, so results are identical for any thread count.
template <typename F>
void run_indexed(std::size_t n, F&& f, Exec exec) {
#ifdef _OPENMP
  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic)
    for (long long i = 0; i < static_cast<long long>(n); ++i)
      f(static_cast<std::size_t>(i));
    return;
  }
#else
  (void)exec;
#endif
  for (std::size_t i = 0; i < n; ++i) f(i);
}

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

}  // namespace irsched
