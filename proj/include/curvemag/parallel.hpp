#pragma once

#include <cstddef>
#include <vector>

namespace curvemag {

/// Execution policy for the data-parallel kernels. Both paths evaluate the
/// same per-item expressions and reduce in index order, so results are
/// bitwise identical regardless of thread count.
enum class Exec { serial, parallel };

/// Sets the OpenMP thread count; n <= 0 leaves the runtime default.
void set_num_threads(int n);
int max_threads();

namespace detail {

template <typename Fn>
void for_each_index(Exec exec, std::ptrdiff_t n, Fn&& fn) {
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) fn(i);
  } else {
    for (std::ptrdiff_t i = 0; i < n; ++i) fn(i);
  }
}

// Left-to-right sum in extended precision; the fixed order keeps parallel runs
// reproducible and the wide accumulator keeps line searches above the noise.
inline long double ordered_sum_wide(const std::vector<double>& terms) {
  long double acc = 0.0L;
  for (double t : terms) acc += t;
  return acc;
}

inline double ordered_sum(const std::vector<double>& terms) { return static_cast<double>(ordered_sum_wide(terms)); }

}  // namespace detail
}  // namespace curvemag
