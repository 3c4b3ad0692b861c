#pragma once

#include "ergolab/lab/estimators.hpp"
#include "ergolab/sim/subsample.hpp"

namespace ergolab::lab {

// Empirical mass the demo chain's long-run averages put near a given point
// set, at a decreasing sequence of window half-widths.  A set the dynamics
// never charge shows mass -> 0 as the windows shrink, even though the set is
// dynamically distinguished (the transition law jumps across it).
struct InvisibilityReport {
  std::vector<double> deltas;
  std::vector<double> masses;       // fraction of visited states within delta of the set
  std::int64_t steps = 0;
};

InvisibilityReport invisibility_diagnostic(const sim::QuasiFellerDemoSpec& spec,
                                           const std::vector<double>& points,
                                           const std::vector<double>& deltas, std::int64_t steps,
                                           std::uint64_t seed);

// One (beta, seed) cell of the coexistence scan: time-averaged magnetization
// from the all-plus and all-minus starts over the second half of the run,
// their occupation histograms, and whether the two stay on opposite sides of
// +/- m_star.
struct CoexistenceReport {
  double beta = 0.0;
  std::uint64_t seed = 0;
  double m_plus = 0.0;
  double m_minus = 0.0;
  bool separated = false;
  double tv = 0.0;  // TV distance between the two magnetization histograms
  double m_star = 0.0;
  double horizon = 0.0;
};

struct CoexistenceScanOptions {
  int magnetization_bins = 32;
  Exec exec = default_exec();
};

// Runs the scan over all (beta, seed) pairs.  The first half of each run is
// discarded as burn-in; statistics are time-weighted over the second half.
std::vector<CoexistenceReport> coexistence_scan(int side, const std::vector<double>& betas,
                                                double horizon, double m_star,
                                                const std::vector<std::uint64_t>& seeds,
                                                const CoexistenceScanOptions& options = {});

// Escape frequency of the subsampled dynamics from each magnetized start:
// the fraction of resolvent-chain observations landing in the opposite
// near-consensus set {|m -+ 1| ... m <= -m_star} (resp. m >= m_star).
struct EscapeReport {
  double beta = 0.0;
  double alpha = 0.0;
  double m_star = 0.0;
  std::int64_t observations = 0;
  struct Row {
    std::uint64_t seed = 0;
    double from_plus = 0.0;   // fraction of observations with m <= -m_star
    double from_minus = 0.0;  // fraction of observations with m >= +m_star
  };
  std::vector<Row> rows;
  double mean_from_plus = 0.0;
  double mean_from_minus = 0.0;
};

EscapeReport absorbing_diagnostic(int side, double beta, double alpha, double m_star,
                                  std::int64_t observations,
                                  const std::vector<std::uint64_t>& seeds,
                                  Exec exec = default_exec());

}  // namespace ergolab::lab
