#include "ergolab/lab/binning.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ergolab::lab {

std::int64_t GridBinning::cells() const {
  std::int64_t c = 1;
  for (int d = 0; d < dim; ++d) c *= bins_per_axis;
  return c;
}

std::int64_t GridBinning::total_bins() const { return cells() + 1; }

void GridBinning::validate() const {
  if (dim < 1) throw std::domain_error("grid dimension must be >= 1");
  if (bins_per_axis < 1) throw std::domain_error("bins per axis must be >= 1");
  if (static_cast<int>(lo.size()) != dim || static_cast<int>(hi.size()) != dim)
    throw std::domain_error("grid bounds must have one entry per axis");
  for (int d = 0; d < dim; ++d) {
    if (!(lo[d] < hi[d])) throw std::domain_error("grid bounds must satisfy lo < hi on every axis");
  }
  if (dim > 6) throw std::domain_error("grid dimension above 6 is not supported");
}

double GridBinning::width(int axis) const {
  return (hi[axis] - lo[axis]) / static_cast<double>(bins_per_axis);
}

std::int64_t GridBinning::index_of(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != dim) throw std::domain_error("point dimension mismatch");
  std::int64_t idx = 0;
  for (int d = 0; d < dim; ++d) {
    if (!(x[d] >= lo[d] && x[d] <= hi[d])) return cells();
    auto k = static_cast<std::int64_t>((x[d] - lo[d]) / width(d));
    if (k >= bins_per_axis) k = bins_per_axis - 1;  // top edge inclusive
    idx = idx * bins_per_axis + k;
  }
  return idx;
}

std::vector<double> GridBinning::center_of(std::int64_t cell) const {
  if (cell < 0 || cell >= cells()) throw std::domain_error("cell index out of range");
  std::vector<double> c(static_cast<std::size_t>(dim), 0.0);
  for (int d = dim - 1; d >= 0; --d) {
    const std::int64_t k = cell % bins_per_axis;
    cell /= bins_per_axis;
    c[static_cast<std::size_t>(d)] = lo[static_cast<std::size_t>(d)] + (static_cast<double>(k) + 0.5) * width(d);
  }
  return c;
}

GridBinning GridBinning::fit_to_path(const sim::SamplePath& path, int bins_per_axis,
                                     double padding) {
  path.validate();
  GridBinning g;
  g.dim = path.dim;
  g.bins_per_axis = bins_per_axis;
  g.lo.assign(static_cast<std::size_t>(path.dim), 0.0);
  g.hi.assign(static_cast<std::size_t>(path.dim), 0.0);
  for (int d = 0; d < path.dim; ++d) {
    double mn = path.states[static_cast<std::size_t>(d)];
    double mx = mn;
    for (std::size_t i = 0; i < path.size(); ++i) {
      const double v = path.state(i)[static_cast<std::size_t>(d)];
      mn = std::min(mn, v);
      mx = std::max(mx, v);
    }
    double pad = (mx - mn) * padding;
    if (pad == 0.0) pad = 0.5;
    g.lo[static_cast<std::size_t>(d)] = mn - pad;
    g.hi[static_cast<std::size_t>(d)] = mx + pad;
  }
  g.validate();
  return g;
}

std::int64_t total_bins(const Binning& b) {
  return std::visit(
      [](const auto& bb) -> std::int64_t {
        using T = std::decay_t<decltype(bb)>;
        if constexpr (std::is_same_v<T, FiniteBinning>) {
          return bb.n;
        } else {
          return bb.total_bins();
        }
      },
      b);
}

std::int64_t bin_index(const Binning& b, std::span<const double> x) {
  return std::visit(
      [&](const auto& bb) -> std::int64_t {
        using T = std::decay_t<decltype(bb)>;
        if constexpr (std::is_same_v<T, FiniteBinning>) {
          if (x.size() != 1) throw std::domain_error("finite binning expects scalar states");
          const double v = x[0];
          const auto k = static_cast<std::int64_t>(std::llround(v));
          if (std::abs(v - static_cast<double>(k)) > 1e-9 || k < 0 || k >= bb.n) {
            std::ostringstream os;
            os << "state " << v << " is not a valid index below " << bb.n;
            throw std::domain_error(os.str());
          }
          return k;
        } else {
          return bb.index_of(x);
        }
      },
      b);
}

double EmpiricalMeasure::overflow_mass() const {
  if (std::holds_alternative<FiniteBinning>(binning)) return 0.0;
  return weights(weights.size() - 1);
}

void EmpiricalMeasure::validate() const {
  if (weights.size() != total_bins(binning)) throw std::domain_error("weight count mismatch");
  if (!weights.allFinite()) throw std::domain_error("non-finite weights");
  if (weights.minCoeff() < 0.0) throw std::domain_error("negative weights");
  if (std::abs(weights.sum() - 1.0) > tol::kernel_row_sum)
    throw std::domain_error("weights must sum to one");
}

}  // namespace ergolab::lab
