#pragma once

#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "ergolab/common.hpp"
#include "ergolab/sim/path.hpp"

namespace ergolab::lab {

// Identity binning over a finite state space {0, ..., n-1}; out-of-range
// states are an error rather than overflow.
struct FiniteBinning {
  int n = 0;
  bool operator==(const FiniteBinning&) const = default;
};

// Uniform axis-aligned grid with bins_per_axis cells per axis plus a single
// shared overflow cell (the last index) for anything outside the box.  Cells
// are half-open except along the top edge, which is inclusive so the box
// boundary carries no overflow mass.
struct GridBinning {
  int dim = 1;
  std::vector<double> lo, hi;
  int bins_per_axis = 64;

  std::int64_t cells() const;       // bins_per_axis^dim regular cells
  std::int64_t total_bins() const;  // cells() + 1 (overflow last)
  std::int64_t index_of(std::span<const double> x) const;
  bool is_overflow(std::int64_t idx) const { return idx == cells(); }
  std::vector<double> center_of(std::int64_t cell) const;  // regular cells only
  double width(int axis) const;
  void validate() const;

  // Axis-aligned box spanning the path's coordinate ranges, padded by the
  // given fraction of each range (degenerate ranges padded by 0.5).
  static GridBinning fit_to_path(const sim::SamplePath& path, int bins_per_axis = 64,
                                 double padding = 0.1);

  bool operator==(const GridBinning&) const = default;
};

using Binning = std::variant<FiniteBinning, GridBinning>;

std::int64_t total_bins(const Binning& b);
std::int64_t bin_index(const Binning& b, std::span<const double> x);

// Weighted histogram normalized to total mass one.
struct EmpiricalMeasure {
  Binning binning;
  Vec weights;         // total_bins entries, sums to one
  double normalizer = 0.0;  // total time (occupation) or count

  double overflow_mass() const;
  void validate() const;
};

}  // namespace ergolab::lab
