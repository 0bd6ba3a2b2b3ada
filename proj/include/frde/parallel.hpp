#pragma once

#include <cstddef>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace frde {

// Serial and parallel execution of the same loop body. Every body computes
// its slot independently with a fixed internal summation order, so both
// policies produce bitwise-identical results.
enum class Exec { serial, parallel };

inline bool parallel_available() noexcept {
#ifdef _OPENMP
  return true;
#else
  return false;
#endif
}

inline int max_threads() noexcept {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

template <typename Body>
void for_each_index(Exec exec, std::ptrdiff_t n, Body&& body) {
#ifdef _OPENMP
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) body(static_cast<std::size_t>(i));
    return;
  }
#else
  (void)exec;
#endif
  for (std::ptrdiff_t i = 0; i < n; ++i) body(static_cast<std::size_t>(i));
}

}  // namespace frde
