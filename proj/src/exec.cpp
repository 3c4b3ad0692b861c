#include "ergolab/exec.hpp"

#ifdef ERGOLAB_HAVE_OPENMP
#include <omp.h>
#endif

namespace ergolab {

Exec default_exec() {
#ifdef ERGOLAB_HAVE_OPENMP
  return Exec::openmp;
#else
  return Exec::serial;
#endif
}

int exec_threads(Exec exec) {
#ifdef ERGOLAB_HAVE_OPENMP
  if (exec == Exec::openmp) return omp_get_max_threads();
#else
  (void)exec;
#endif
  return 1;
}

void parallel_for(std::int64_t n, Exec exec, const std::function<void(std::int64_t)>& body) {
#ifdef ERGOLAB_HAVE_OPENMP
  if (exec == Exec::openmp) {
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) body(i);
    return;
  }
#else
  (void)exec;
#endif
  for (std::int64_t i = 0; i < n; ++i) body(i);
}

double pairwise_sum(std::span<const double> xs) {
  const std::size_t n = xs.size();
  if (n == 0) return 0.0;
  if (n <= 8) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

double pairwise_mean(std::span<const double> xs) {
  if (xs.empty()) return 0.0;
  return pairwise_sum(xs) / static_cast<double>(xs.size());
}

}  // namespace ergolab
