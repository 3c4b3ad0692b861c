#include "ergolab/kernel/types.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ergolab/dense.hpp"

namespace ergolab::kernel {
namespace {

void require_square(const Mat& m, const char* what) {
  if (m.rows() == 0 || m.rows() != m.cols()) {
    std::ostringstream os;
    os << what << " must be square and non-empty, got " << m.rows() << "x" << m.cols();
    throw std::domain_error(os.str());
  }
  if (!m.allFinite()) {
    std::ostringstream os;
    os << what << " contains non-finite entries";
    throw std::domain_error(os.str());
  }
}

}  // namespace

RateMatrix::RateMatrix(Mat rates) : rates_(std::move(rates)) {
  require_square(rates_, "rate matrix");
  const int n = static_cast<int>(rates_.rows());
  const double scale = rates_.cwiseAbs().maxCoeff();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i != j && rates_(i, j) < 0.0) {
        std::ostringstream os;
        os << "negative off-diagonal rate " << rates_(i, j) << " at (" << i << "," << j << ")";
        throw std::domain_error(os.str());
      }
    }
    const double row_sum = rates_.row(i).sum();
    if (std::abs(row_sum) > tol::rate_row_sum * std::max(scale, 1.0)) {
      std::ostringstream os;
      os << "row " << i << " sums to " << row_sum << ", expected 0";
      throw std::domain_error(os.str());
    }
  }
  uniform_rate_ = n > 0 ? (-rates_.diagonal().minCoeff()) : 0.0;
  uniform_rate_ = std::max(uniform_rate_, 0.0);
}

StochasticKernel::StochasticKernel(Mat p, KernelLabel label) : p_(std::move(p)), label_(label) {
  require_square(p_, "stochastic kernel");
  const int n = static_cast<int>(p_.rows());
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double& v = p_(i, j);
      if (v < 0.0 || v > 1.0) {
        if (v >= -1e-12 && v <= 1.0 + 1e-12) {
          v = std::clamp(v, 0.0, 1.0);
        } else {
          std::ostringstream os;
          os << "kernel entry " << v << " at (" << i << "," << j << ") outside [0,1]";
          throw std::domain_error(os.str());
        }
      }
    }
    const double row_sum = p_.row(i).sum();
    if (std::abs(row_sum - 1.0) > tol::kernel_row_sum) {
      std::ostringstream os;
      os << "kernel row " << i << " sums to " << row_sum << ", expected 1";
      throw std::domain_error(os.str());
    }
  }
}

StochasticKernel StochasticKernel::compose(const StochasticKernel& other, Exec exec) const {
  if (other.size() != size()) throw std::domain_error("kernel composition size mismatch");
  Mat c(size(), size());
  dense::gemm(p_, other.p_, c, exec);
  return StochasticKernel(std::move(c), KernelLabel{KernelKind::product, 0.0});
}

Vec StochasticKernel::apply_left(const Vec& mu, Exec exec) const {
  if (mu.size() != size()) throw std::domain_error("measure/kernel size mismatch");
  return dense::row_vec_mul(mu, p_, exec);
}

DiscreteMeasure::DiscreteMeasure(Vec weights, bool normalized)
    : weights_(std::move(weights)), normalized_(normalized) {
  if (weights_.size() == 0) throw std::domain_error("measure must have at least one state");
  if (!weights_.allFinite()) throw std::domain_error("measure contains non-finite weights");
  const double scale = std::max(weights_.cwiseAbs().maxCoeff(), 1e-300);
  for (Eigen::Index i = 0; i < weights_.size(); ++i) {
    if (weights_(i) < 0.0) {
      if (weights_(i) >= -tol::support_eps * scale) {
        weights_(i) = 0.0;
      } else {
        std::ostringstream os;
        os << "negative weight " << weights_(i) << " at state " << i;
        throw std::domain_error(os.str());
      }
    }
  }
  if (normalized_) {
    const double mass = weights_.sum();
    if (std::abs(mass - 1.0) > tol::kernel_row_sum) {
      std::ostringstream os;
      os << "measure mass " << mass << " differs from 1";
      throw std::domain_error(os.str());
    }
  }
}

DiscreteMeasure DiscreteMeasure::dirac(int n, int state) {
  if (n < 1 || state < 0 || state >= n) throw std::domain_error("dirac state out of range");
  Vec w = Vec::Zero(n);
  w(state) = 1.0;
  return DiscreteMeasure(std::move(w), true);
}

DiscreteMeasure DiscreteMeasure::counting(int n) {
  if (n < 1) throw std::domain_error("counting measure needs n >= 1");
  return DiscreteMeasure(Vec::Ones(n), false);
}

DiscreteMeasure DiscreteMeasure::probability(Vec weights) {
  DiscreteMeasure raw(std::move(weights), false);
  const double mass = raw.total_mass();
  if (!(mass > 0.0)) throw std::domain_error("cannot normalize a zero measure");
  return DiscreteMeasure(raw.weights() / mass, true);
}

std::vector<int> DiscreteMeasure::support() const {
  std::vector<int> out;
  const double w_max = weights_.maxCoeff();
  if (w_max <= 0.0) return out;
  const double cut = tol::support_eps * w_max;
  for (Eigen::Index i = 0; i < weights_.size(); ++i) {
    if (weights_(i) > cut) out.push_back(static_cast<int>(i));
  }
  return out;
}

double DiscreteMeasure::mass_on(const std::vector<int>& states) const {
  double m = 0.0;
  for (int s : states) {
    if (s < 0 || s >= size()) throw std::domain_error("state index out of range");
    m += weights_(s);
  }
  return m;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::unique: return "unique";
    case Verdict::multiple: return "multiple";
    case Verdict::no_invariant_probability: return "no-invariant-probability";
  }
  return "unknown";
}

}  // namespace ergolab::kernel
