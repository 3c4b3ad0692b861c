#include "ergolab/lab/estimators.hpp"

#include <cmath>

namespace ergolab::lab {

EmpiricalMeasure occupation_measure(const sim::SamplePath& path, const Binning& binning) {
  path.validate();
  if (path.size() < 2) throw std::domain_error("occupation measure needs at least two samples");
  const double duration = path.duration();
  if (!(duration > 0.0)) throw std::domain_error("path has zero duration");

  EmpiricalMeasure mu;
  mu.binning = binning;
  mu.weights = Vec::Zero(total_bins(binning));
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    const double dt = path.times[i + 1] - path.times[i];
    mu.weights(bin_index(binning, path.state(i))) += dt;
  }
  mu.weights /= duration;
  mu.normalizer = duration;
  mu.validate();
  return mu;
}

std::vector<double> tightness_profile(const EmpiricalMeasure& mu, const std::vector<double>& radii,
                                      const std::vector<double>& center) {
  mu.validate();
  const auto* grid = std::get_if<GridBinning>(&mu.binning);
  if (grid == nullptr)
    throw std::domain_error("tightness profile needs a grid binning; finite spaces cannot escape");
  if (radii.empty()) throw std::domain_error("radii must be non-empty");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > 0.0)) throw std::domain_error("radii must be positive");
    if (i > 0 && !(radii[i] > radii[i - 1]))
      throw std::domain_error("radii must be strictly increasing");
  }
  std::vector<double> c = center;
  if (c.empty()) c.assign(static_cast<std::size_t>(grid->dim), 0.0);
  if (static_cast<int>(c.size()) != grid->dim) throw std::domain_error("center dimension mismatch");

  std::vector<double> outside(radii.size(), 0.0);
  for (std::int64_t cell = 0; cell < grid->cells(); ++cell) {
    const double w = mu.weights(cell);
    if (w == 0.0) continue;
    const auto x = grid->center_of(cell);
    double d2 = 0.0;
    for (int d = 0; d < grid->dim; ++d) {
      const double dx = x[static_cast<std::size_t>(d)] - c[static_cast<std::size_t>(d)];
      d2 += dx * dx;
    }
    const double dist = std::sqrt(d2);
    for (std::size_t r = 0; r < radii.size(); ++r) {
      if (dist > radii[r]) outside[r] += w;
    }
  }
  const double overflow = mu.overflow_mass();
  for (auto& v : outside) v += overflow;
  return outside;
}

double invariance_residual(const EmpiricalMeasure& mu, const kernel::StochasticKernel& k,
                           Exec exec) {
  mu.validate();
  const auto* finite = std::get_if<FiniteBinning>(&mu.binning);
  if (finite == nullptr)
    throw std::domain_error("invariance residual needs a finite-state measure");
  if (finite->n != k.size()) throw std::domain_error("measure/kernel size mismatch");
  const Vec moved = k.apply_left(mu.weights, exec);
  return 0.5 * (moved - mu.weights).cwiseAbs().sum();
}

double tv_distance(const EmpiricalMeasure& a, const EmpiricalMeasure& b) {
  a.validate();
  b.validate();
  if (!(a.binning == b.binning)) throw std::domain_error("total variation needs a common binning");
  return 0.5 * (a.weights - b.weights).cwiseAbs().sum();
}

EmpiricalMeasure histogram(std::span<const double> points, int dim, const Binning& binning) {
  if (dim < 1) throw std::domain_error("dimension must be >= 1");
  if (points.empty() || points.size() % static_cast<std::size_t>(dim) != 0)
    throw std::domain_error("point array must hold a positive whole number of rows");
  const std::size_t n = points.size() / static_cast<std::size_t>(dim);
  EmpiricalMeasure mu;
  mu.binning = binning;
  mu.weights = Vec::Zero(total_bins(binning));
  for (std::size_t i = 0; i < n; ++i) {
    mu.weights(bin_index(binning, points.subspan(i * static_cast<std::size_t>(dim),
                                                 static_cast<std::size_t>(dim)))) += 1.0;
  }
  mu.weights /= static_cast<double>(n);
  mu.normalizer = static_cast<double>(n);
  mu.validate();
  return mu;
}

}  // namespace ergolab::lab
