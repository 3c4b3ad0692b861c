#pragma once

#include "ergolab/kernel/types.hpp"
#include "ergolab/lab/binning.hpp"

namespace ergolab::lab {

// Time-weighted occupation measure of a piecewise-constant path: each sample
// contributes its holding interval to its bin, normalized by the recorded
// duration.  Invariant under shifting every timestamp by a constant.  Needs
// at least two samples (otherwise the occupation time is undefined).
EmpiricalMeasure occupation_measure(const sim::SamplePath& path, const Binning& binning);

// Mass outside the closed Euclidean ball of each radius around `center`
// (bin-center convention; overflow counts as outside every radius).  Radii
// must be strictly increasing.  Grid binnings only: escape to infinity is
// meaningless for a finite state space, so FiniteBinning is rejected.
std::vector<double> tightness_profile(const EmpiricalMeasure& mu, const std::vector<double>& radii,
                                      const std::vector<double>& center = {});

// Total variation between mu (on a FiniteBinning matching the kernel size)
// and mu applied to the kernel: TV(mu, mu K).
double invariance_residual(const EmpiricalMeasure& mu, const kernel::StochasticKernel& k,
                           Exec exec = default_exec());

// Total variation distance between two measures on the same binning.
double tv_distance(const EmpiricalMeasure& a, const EmpiricalMeasure& b);

// Plain count histogram of point observations (rows of `points`, flattened).
EmpiricalMeasure histogram(std::span<const double> points, int dim, const Binning& binning);

}  // namespace ergolab::lab
