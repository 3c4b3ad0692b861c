#include "ergolab/lab/drift.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ergolab/exec.hpp"

namespace ergolab::lab {
namespace {

std::vector<std::vector<double>> grid_points(const SampleBox& box, int per_axis) {
  const int dim = static_cast<int>(box.lo.size());
  if (dim < 1 || box.hi.size() != box.lo.size())
    throw std::domain_error("box must have matching lo/hi of dimension >= 1");
  for (int d = 0; d < dim; ++d) {
    if (!(box.lo[d] < box.hi[d])) throw std::domain_error("box must satisfy lo < hi on every axis");
  }
  if (per_axis < 2) throw std::domain_error("need at least two samples per axis");
  std::int64_t total = 1;
  for (int d = 0; d < dim; ++d) {
    total *= per_axis;
    if (total > 200000) throw std::domain_error("evaluation grid too large");
  }
  std::vector<std::vector<double>> pts;
  pts.reserve(static_cast<std::size_t>(total));
  for (std::int64_t k = 0; k < total; ++k) {
    std::int64_t rem = k;
    std::vector<double> x(static_cast<std::size_t>(dim), 0.0);
    for (int d = dim - 1; d >= 0; --d) {
      const int i = static_cast<int>(rem % per_axis);
      rem /= per_axis;
      x[static_cast<std::size_t>(d)] =
          box.lo[static_cast<std::size_t>(d)] +
          (box.hi[static_cast<std::size_t>(d)] - box.lo[static_cast<std::size_t>(d)]) *
              (static_cast<double>(i) / static_cast<double>(per_axis - 1));
    }
    pts.push_back(std::move(x));
  }
  return pts;
}

// Restarts the process at the given point with one integration step equal to
// the estimator horizon; only continuous-state processes are supported.
sim::ProcessSpec restarted_at(const sim::ProcessSpec& spec, const std::vector<double>& x,
                              double step) {
  sim::ProcessSpec out = spec;
  if (auto* e = std::get_if<sim::EllipticDiffusionSpec>(&out)) {
    if (x.size() != static_cast<std::size_t>(e->dim))
      throw std::domain_error("point dimension mismatch");
    e->x0 = x;
    e->step = step;
    return out;
  }
  if (auto* l = std::get_if<sim::LangevinSpec>(&out)) {
    if (x.size() != static_cast<std::size_t>(2 * l->dim))
      throw std::domain_error("point dimension mismatch");
    l->x0.assign(x.begin(), x.begin() + l->dim);
    l->v0.assign(x.begin() + l->dim, x.end());
    l->step = step;
    return out;
  }
  throw std::domain_error("drift check supports diffusion and kinetic processes only");
}

double estimate_generator(const sim::ProcessSpec& spec, const std::vector<double>& x,
                          const std::function<double(std::span<const double>)>& v, double vx,
                          std::int64_t point_index, const DriftCheckOptions& options) {
  const auto restarted = restarted_at(spec, x, options.fd_horizon);
  std::vector<double> samples(static_cast<std::size_t>(options.fd_replicas), 0.0);
  for (int j = 0; j < options.fd_replicas; ++j) {
    const std::uint64_t replica =
        static_cast<std::uint64_t>(point_index) * static_cast<std::uint64_t>(options.fd_replicas) +
        static_cast<std::uint64_t>(j) + 1;
    if (const auto* e = std::get_if<sim::EllipticDiffusionSpec>(&restarted)) {
      sim::EulerSimulator sim(*e, options.seed, replica);
      sim.advance_to(options.fd_horizon);
      samples[static_cast<std::size_t>(j)] = v(sim.state());
    } else {
      sim::EulerSimulator sim(std::get<sim::LangevinSpec>(restarted), options.seed, replica);
      sim.advance_to(options.fd_horizon);
      samples[static_cast<std::size_t>(j)] = v(sim.state());
    }
  }
  return (pairwise_mean(samples) - vx) / options.fd_horizon;
}

}  // namespace

DriftReport lyapunov_drift_check(const sim::ProcessSpec& spec,
                                 const std::function<double(std::span<const double>)>& v,
                                 const SampleBox& box, const DriftCheckOptions& options) {
  if (!v) throw std::domain_error("drift check needs a test function");
  if (!(options.outlier_budget >= 0.0 && options.outlier_budget < 0.5))
    throw std::domain_error("outlier budget must lie in [0, 0.5)");
  if (!(options.compact_radius >= 0.0)) throw std::domain_error("compact radius must be >= 0");
  if (!options.analytic_generator) {
    if (!(options.fd_horizon > 0.0)) throw std::domain_error("estimator horizon must be positive");
    if (options.fd_replicas < 1) throw std::domain_error("estimator needs replicas >= 1");
  }

  const auto pts = grid_points(box, options.samples_per_axis);
  const auto total = static_cast<std::int64_t>(pts.size());
  std::vector<double> v_vals(pts.size()), g_vals(pts.size());

  // V and the generator are evaluated point-independently; first failure
  // wins deterministically because points are re-scanned serially below.
  std::exception_ptr failure = nullptr;
  parallel_for(total, options.exec, [&](std::int64_t p) {
    try {
      const auto& x = pts[static_cast<std::size_t>(p)];
      const double vx = v(std::span<const double>(x));
      v_vals[static_cast<std::size_t>(p)] = vx;
      if (!(vx >= 1.0)) return;  // reported after the scan
      if (options.analytic_generator) {
        g_vals[static_cast<std::size_t>(p)] =
            (*options.analytic_generator)(std::span<const double>(x));
      } else {
        g_vals[static_cast<std::size_t>(p)] = estimate_generator(spec, x, v, vx, p, options);
      }
    } catch (...) {
      if (!failure) failure = std::current_exception();
    }
  });
  if (failure) std::rethrow_exception(failure);
  for (std::int64_t p = 0; p < total; ++p) {
    if (!(v_vals[static_cast<std::size_t>(p)] >= 1.0)) {
      std::ostringstream os;
      os << "test function dips below 1 (value " << v_vals[static_cast<std::size_t>(p)]
         << " at sample point " << p << ")";
      throw std::domain_error(os.str());
    }
  }

  DriftReport report;
  report.compact_radius = options.compact_radius;
  report.outlier_budget = options.outlier_budget;
  report.total_points = total;

  // Fit set: points outside the compact ball, with their V and GV values.
  std::vector<double> fit_v, fit_g;
  for (std::int64_t p = 0; p < total; ++p) {
    const auto& x = pts[static_cast<std::size_t>(p)];
    double n2 = 0.0;
    for (double xi : x) n2 += xi * xi;
    if (std::sqrt(n2) >= options.compact_radius) {
      fit_v.push_back(v_vals[static_cast<std::size_t>(p)]);
      fit_g.push_back(g_vals[static_cast<std::size_t>(p)]);
    }
  }
  report.fit_points = static_cast<std::int64_t>(fit_v.size());
  if (fit_v.empty()) throw std::domain_error("compact radius excludes every sample point");

  // Least-squares slope of GV against V; half its decay is the certified c.
  const auto m = static_cast<double>(fit_v.size());
  const double mean_v = pairwise_mean(fit_v);
  const double mean_g = pairwise_mean(fit_g);
  double cov = 0.0, var = 0.0;
  for (std::size_t i = 0; i < fit_v.size(); ++i) {
    cov += (fit_v[i] - mean_v) * (fit_g[i] - mean_g);
    var += (fit_v[i] - mean_v) * (fit_v[i] - mean_v);
  }
  const double slope = var > 0.0 ? cov / var : 0.0;
  report.c = std::max(0.0, -slope / 2.0);

  std::vector<double> residual(fit_v.size());
  for (std::size_t i = 0; i < fit_v.size(); ++i) residual[i] = fit_g[i] + report.c * fit_v[i];
  std::sort(residual.begin(), residual.end());
  const auto allowed = static_cast<std::int64_t>(std::floor(options.outlier_budget * m));
  const std::size_t cut = residual.size() - 1 - static_cast<std::size_t>(allowed);
  report.big_c = residual[cut];
  std::int64_t violations = 0;
  for (std::size_t i = cut + 1; i < residual.size(); ++i) {
    if (residual[i] > report.big_c) ++violations;
  }
  report.violations = violations;
  report.passing = report.c > 0.0 && std::isfinite(report.big_c);
  return report;
}

}  // namespace ergolab::lab
