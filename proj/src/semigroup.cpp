#include <cmath>
#include <sstream>

#include "ergolab/dense.hpp"
#include "ergolab/diag.hpp"
#include "ergolab/kernel/ops.hpp"

namespace ergolab::kernel {
namespace {

// Poisson pmf in log space; stable for large means where exp(-mean)
// underflows.
double poisson_pmf(std::int64_t k, double mean) {
  const double lk = static_cast<double>(k);
  return std::exp(lk * std::log(mean) - mean - std::lgamma(lk + 1.0));
}

}  // namespace

StochasticKernel semigroup(const RateMatrix& gen, double t, Exec exec) {
  if (!(t >= 0.0)) {
    std::ostringstream os;
    os << "semigroup time must be >= 0, got " << t;
    throw std::domain_error(os.str());
  }
  const int n = gen.size();
  const double q = gen.uniformization_rate();
  const double mean = q * t;
  if (mean == 0.0) {
    return StochasticKernel(Mat::Identity(n, n), KernelLabel{KernelKind::semigroup, t});
  }

  // Pu = I + L/q has rows summing to one and entries in [0, 1] exactly,
  // because |L(i,i)| <= q.
  Mat pu = Mat::Identity(n, n) + gen.rates() / q;

  Mat sum = Mat::Zero(n, n);
  Mat power = Mat::Identity(n, n);  // Pu^k
  Mat next(n, n);
  double cumulative = 0.0;
  std::int64_t k = 0;
  while (true) {
    const double w = poisson_pmf(k, mean);
    if (w > 0.0) {
      dense::add_scaled(sum, power, w, exec);
      cumulative += w;
    }
    if (1.0 - cumulative < tol::poisson_tail) break;
    ++k;
    if (k > tol::uniformization_cap) {
      std::ostringstream os;
      os << "uniformization did not reach tail " << tol::poisson_tail << " within "
         << tol::uniformization_cap << " terms (q*t = " << mean
         << ", accumulated mass = " << cumulative << ")";
      throw numerical_error(os.str());
    }
    dense::gemm(power, pu, next, exec);
    power.swap(next);
  }
  if (diag::enabled()) {
    std::ostringstream os;
    os << "semigroup t=" << t << " used " << (k + 1) << " uniformization terms";
    diag::append(os.str());
  }

  // The truncated series under-weights every row by the same tail mass;
  // renormalizing restores stochasticity without biasing any row.
  dense::normalize_rows(sum);
  return StochasticKernel(std::move(sum), KernelLabel{KernelKind::semigroup, t});
}

DiscreteMeasure skeleton_cesaro(const RateMatrix& gen, double s, int x0, std::int64_t n, Exec exec) {
  if (!(s > 0.0)) throw std::domain_error("skeleton period must be positive");
  if (n < 1) throw std::domain_error("skeleton average needs n >= 1");
  if (x0 < 0 || x0 >= gen.size()) throw std::domain_error("skeleton start state out of range");

  const StochasticKernel step = semigroup(gen, s, exec);
  Vec nu = Vec::Zero(gen.size());
  nu(x0) = 1.0;
  Vec acc = Vec::Zero(gen.size());
  for (std::int64_t j = 0; j < n; ++j) {
    acc += nu;
    if (j + 1 < n) nu = step.apply_left(nu, exec);
  }
  acc /= static_cast<double>(n);
  acc /= acc.sum();  // remove accumulated round-off so the mass is exactly one
  return DiscreteMeasure(std::move(acc), true);
}

}  // namespace ergolab::kernel
