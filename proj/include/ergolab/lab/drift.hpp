#pragma once

#include <functional>
#include <optional>

#include "ergolab/sim/simulate.hpp"

namespace ergolab::lab {

// Axis-aligned evaluation box for the drift test.
struct SampleBox {
  std::vector<double> lo, hi;
};

struct DriftCheckOptions {
  // Points with Euclidean norm below this radius are excluded from the fit
  // (the inequality only needs to hold outside a compact set).
  double compact_radius = 0.5;
  // Fraction of fit points allowed above the reported C.
  double outlier_budget = 0.0;
  int samples_per_axis = 41;
  // Exact generator applied to V, when available; otherwise the generator is
  // estimated by the forward difference (E_x V(X_h) - V(x)) / h.
  std::optional<std::function<double(std::span<const double>)>> analytic_generator;
  double fd_horizon = 1e-3;
  int fd_replicas = 1000;
  std::uint64_t seed = 0;
  Exec exec = default_exec();
};

struct DriftReport {
  double c = 0.0;
  double big_c = 0.0;
  double compact_radius = 0.0;
  double outlier_budget = 0.0;
  std::int64_t violations = 0;
  std::int64_t fit_points = 0;
  std::int64_t total_points = 0;
  bool passing = false;
};

// Fits the strongest geometric-drift inequality  GV <= -c V + C  supported by
// the sampled generator values: c is half the least-squares decay slope of GV
// against V over the fit points (clamped at zero), and C is the smallest
// level covering all but the allowed outlier fraction of G V + c V.  A
// non-positive c yields a failing report rather than an error; V dipping
// below 1 on the box is a domain error.
DriftReport lyapunov_drift_check(const sim::ProcessSpec& spec,
                                 const std::function<double(std::span<const double>)>& v,
                                 const SampleBox& box, const DriftCheckOptions& options = {});

}  // namespace ergolab::lab
