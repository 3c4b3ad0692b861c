#pragma once

#include <vector>

#include "ergolab/kernel/types.hpp"

namespace ergolab::kernel {

// Transition kernel P_t = exp(t L) by uniformization: with q the largest exit
// rate and Pu = I + L/q, sums Poisson(q t)-weighted powers of Pu until the
// accumulated weight reaches 1 - tol::poisson_tail.  Throws std::domain_error
// for t < 0 and numerical_error (with the truncation diagnostics) if more
// than tol::uniformization_cap terms would be needed.
StochasticKernel semigroup(const RateMatrix& gen, double t, Exec exec = default_exec());

// Normalized resolvent R_alpha = alpha (alpha I - L)^{-1}, alpha > 0; the
// one-step kernel of the exponentially subsampled chain.  Row-stochastic by
// construction; solved by partial-pivot LU with a residual spot check.
StochasticKernel resolvent(const RateMatrix& gen, double alpha, Exec exec = default_exec());

// Cesaro average (1/n) sum_{j<n} P_{j s}(x0, .) of the s-skeleton started at
// x0.  Always a probability measure; its invariance defect under P_s decays
// like 2/n regardless of convergence of P_t itself.
DiscreteMeasure skeleton_cesaro(const RateMatrix& gen, double s, int x0, std::int64_t n,
                                Exec exec = default_exec());

// All extreme invariant probabilities: one per closed communicating class,
// ordered by smallest contained state.  Each is obtained from the singular
// vector of the class-restricted generator and cross-checked against the
// null-space dimension of the full generator (numerical_error on mismatch).
std::vector<DiscreteMeasure> invariant_measures(const RateMatrix& gen);

// Verifies that mu is fixed by the semigroup along a time grid if and only if
// it is fixed by the resolvent at rate alpha, reporting both residuals.
// mu must be normalized.
InvarianceCheck check_invariance_equivalence(const RateMatrix& gen, const DiscreteMeasure& mu,
                                             double alpha, double tolerance = 1e-8,
                                             std::vector<double> t_grid = {0.1, 0.5, 1.0, 2.0, 5.0},
                                             Exec exec = default_exec());

}  // namespace ergolab::kernel
