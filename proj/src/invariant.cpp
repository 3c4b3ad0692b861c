#include <Eigen/SVD>
#include <algorithm>
#include <sstream>

#include "ergolab/kernel/ops.hpp"
#include "ergolab/kernel/structure.hpp"

namespace ergolab::kernel {
namespace {

// Stationary law of the generator restricted to one closed class, via the
// smallest singular vector of the restricted transpose.
Vec class_stationary(const RateMatrix& gen, const std::vector<int>& cls) {
  const int m = static_cast<int>(cls.size());
  Mat lc(m, m);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) lc(a, b) = gen.rate(cls[a], cls[b]);
  // Rows of a closed-class restriction still sum to zero; use the transposed
  // null vector.
  Eigen::JacobiSVD<Mat> svd(lc.transpose(), Eigen::ComputeFullV);
  Vec v = svd.matrixV().col(m - 1);
  if (v.sum() < 0.0) v = -v;
  for (int a = 0; a < m; ++a) v(a) = std::max(v(a), 0.0);
  const double mass = v.sum();
  if (!(mass > 0.0)) throw numerical_error("closed-class stationary vector degenerated to zero");
  return v / mass;
}

int null_space_dimension(const Mat& rates) {
  Eigen::BDCSVD<Mat> svd(rates.transpose());
  const Vec& sv = svd.singularValues();
  const double s_max = sv.size() > 0 ? sv(0) : 0.0;
  if (s_max == 0.0) return static_cast<int>(rates.rows());
  int dim = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) <= tol::svd_cutoff * s_max) ++dim;
  }
  return dim;
}

}  // namespace

std::vector<DiscreteMeasure> invariant_measures(const RateMatrix& gen) {
  const auto classes = closed_classes(gen);
  std::vector<DiscreteMeasure> out;
  out.reserve(classes.size());
  for (const auto& cls : classes) {
    Vec pi = class_stationary(gen, cls);
    Vec full = Vec::Zero(gen.size());
    for (std::size_t a = 0; a < cls.size(); ++a) full(cls[a]) = pi(static_cast<int>(a));
    out.emplace_back(std::move(full), true);
  }

  const int dim = null_space_dimension(gen.rates());
  if (dim != static_cast<int>(classes.size())) {
    std::ostringstream os;
    os << "invariant-measure count disagrees between class decomposition (" << classes.size()
       << ") and null-space dimension (" << dim << ")";
    throw numerical_error(os.str());
  }
  return out;
}

InvarianceCheck check_invariance_equivalence(const RateMatrix& gen, const DiscreteMeasure& mu,
                                             double alpha, double tolerance,
                                             std::vector<double> t_grid, Exec exec) {
  if (!mu.normalized()) throw std::domain_error("invariance check requires a probability measure");
  if (mu.size() != gen.size()) throw std::domain_error("measure/generator size mismatch");
  if (!(alpha > 0.0)) throw std::domain_error("resolvent rate must be positive");
  if (t_grid.empty()) throw std::domain_error("invariance check needs a non-empty time grid");

  InvarianceCheck result;
  result.alpha = alpha;
  result.tolerance = tolerance;
  result.t_grid = t_grid;

  double sg = 0.0;
  for (double t : t_grid) {
    const StochasticKernel pt = semigroup(gen, t, exec);
    const Vec moved = pt.apply_left(mu.weights(), exec);
    sg = std::max(sg, (moved - mu.weights()).cwiseAbs().maxCoeff());
  }
  result.semigroup_residual = sg;

  const StochasticKernel r = resolvent(gen, alpha, exec);
  result.resolvent_residual = (r.apply_left(mu.weights(), exec) - mu.weights()).cwiseAbs().maxCoeff();

  result.invariant = result.semigroup_residual <= tolerance && result.resolvent_residual <= tolerance;
  return result;
}

}  // namespace ergolab::kernel
