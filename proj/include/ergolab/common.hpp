#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace ergolab {

// Dense matrices are row-major throughout so that row-sliced kernels see
// contiguous memory.
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vec = Eigen::VectorXd;

namespace tol {

// Row sums of a rate matrix must vanish relative to its largest entry.
inline constexpr double rate_row_sum = 1e-12;
// Row sums of a stochastic kernel must equal one to this absolute tolerance.
inline constexpr double kernel_row_sum = 1e-10;
// Uniformization stops once the accumulated Poisson mass is this close to one.
inline constexpr double poisson_tail = 1e-14;
// Hard cap on uniformization terms; exceeding it is a numerical failure.
inline constexpr std::int64_t uniformization_cap = 1'000'000;
// Support of a measure: entries above this fraction of the largest weight.
inline constexpr double support_eps = 1e-12;
// Singular values below this fraction of the largest count as zero.
inline constexpr double svd_cutoff = 1e-10;
// Residual bound under which a measure counts as invariant.
inline constexpr double invariance_residual = 1e-10;
// Threshold for "full mass" in the absorbing-set iteration.
inline constexpr double absorbing_mass = 1e-10;

}  // namespace tol

// A linear-algebra routine produced an unusable result (lost convergence,
// inconsistent cross-checks, truncation overflow).
class numerical_error : public std::runtime_error {
 public:
  explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

// A stochastic simulation left its valid state space (non-finite values).
class simulation_error : public std::runtime_error {
 public:
  explicit simulation_error(const std::string& what) : std::runtime_error(what) {}
};

// A persisted artifact does not match its recorded digest.
class integrity_error : public std::runtime_error {
 public:
  explicit integrity_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ergolab
