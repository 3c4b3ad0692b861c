#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ergolab/common.hpp"
#include "ergolab/exec.hpp"

namespace ergolab::kernel {

// Conservative generator of a finite-state jump process: nonnegative
// off-diagonal rates, rows summing to zero.  Immutable after construction.
class RateMatrix {
 public:
  // Validates shape and sign structure; throws std::domain_error with the
  // offending entry on failure.  Row sums may deviate from zero by at most
  // tol::rate_row_sum relative to the largest absolute entry.
  explicit RateMatrix(Mat rates);

  int size() const { return static_cast<int>(rates_.rows()); }
  const Mat& rates() const { return rates_; }
  double rate(int i, int j) const { return rates_(i, j); }

  // Largest exit rate max_i -L(i,i); the uniformization constant.
  double uniformization_rate() const { return uniform_rate_; }

 private:
  Mat rates_;
  double uniform_rate_;
};

enum class KernelKind { semigroup, resolvent, skeleton_average, product, custom };

// Provenance tag of a stochastic kernel: which operator family produced it
// and at which parameter (time, rate, or skeleton period).
struct KernelLabel {
  KernelKind kind = KernelKind::custom;
  double param = 0.0;
};

// Row-stochastic matrix acting on measures from the right (mu -> mu K) and on
// functions from the left.  Immutable after construction.
class StochasticKernel {
 public:
  // Entries must lie in [0, 1] up to 1e-12 slack (clamped) and rows must sum
  // to one within tol::kernel_row_sum; otherwise throws std::domain_error.
  StochasticKernel(Mat p, KernelLabel label);

  int size() const { return static_cast<int>(p_.rows()); }
  const Mat& p() const { return p_; }
  double operator()(int i, int j) const { return p_(i, j); }
  const KernelLabel& label() const { return label_; }

  // Kernel composition; label becomes KernelKind::product.
  StochasticKernel compose(const StochasticKernel& other, Exec exec = default_exec()) const;

  // mu -> mu K (left action of a row vector).
  Vec apply_left(const Vec& mu, Exec exec = default_exec()) const;

 private:
  Mat p_;
  KernelLabel label_;
};

// Nonnegative weight vector over states, optionally normalized to total mass
// one.  Immutable after construction.
class DiscreteMeasure {
 public:
  // Entries below -tol::support_eps relative to the largest weight are
  // rejected; tiny negative round-off is clamped to zero.  If normalized is
  // true the total mass must equal one within tol::kernel_row_sum.
  DiscreteMeasure(Vec weights, bool normalized);

  static DiscreteMeasure dirac(int n, int state);
  static DiscreteMeasure counting(int n);
  // Normalizes an arbitrary nonnegative vector with positive total mass.
  static DiscreteMeasure probability(Vec weights);

  int size() const { return static_cast<int>(weights_.size()); }
  const Vec& weights() const { return weights_; }
  double operator[](int i) const { return weights_(i); }
  bool normalized() const { return normalized_; }
  double total_mass() const { return weights_.sum(); }

  // States carrying more than tol::support_eps of the largest weight.
  std::vector<int> support() const;

  double mass_on(const std::vector<int>& states) const;

 private:
  Vec weights_;
  bool normalized_;
};

// Result of checking one measure for invariance along both routes.
struct InvarianceCheck {
  bool invariant = false;
  double semigroup_residual = 0.0;   // max over the t grid of ||mu P_t - mu||_inf
  double resolvent_residual = 0.0;   // ||mu R_alpha - mu||_inf
  std::vector<double> t_grid;
  double alpha = 0.0;
  double tolerance = 0.0;
};

// Outcome of the pointwise lower-bound test R_alpha(x, .) >= c(x) psi on the
// support of psi, plus the support-inclusion consequence for invariant
// measures when the bound holds.
struct DominationCertificate {
  bool holds = false;
  // First (state, target) pair where the resolvent row vanishes on supp(psi).
  std::optional<std::pair<int, int>> witness;
  // Every invariant probability charges supp(psi); only evaluated when the
  // bound holds.
  std::optional<bool> support_consequence;
  double alpha = 0.0;
};

enum class Verdict { unique, multiple, no_invariant_probability };

struct UniquenessReport {
  int invariant_dim = 0;
  std::vector<DiscreteMeasure> measures;  // one per closed class
  bool irreducible = false;               // psi-irreducibility of the jump graph
  DominationCertificate domination;
  Verdict verdict = Verdict::no_invariant_probability;
};

// Partition of the state space into the absorbing supports of two mutually
// singular invariant measures and the remaining transient states.
struct AbsorbingDecomposition {
  std::vector<int> b_plus;
  std::vector<int> b_minus;
  std::vector<int> residual;
  int iterations_plus = 0;
  int iterations_minus = 0;
};

std::string to_string(Verdict v);

}  // namespace ergolab::kernel
