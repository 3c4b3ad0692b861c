#include "ergolab/lab/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ergolab::lab {
namespace {

GridBinning magnetization_binning(int bins) {
  GridBinning g;
  g.dim = 1;
  g.lo = {-1.0};
  g.hi = {1.0};
  g.bins_per_axis = bins;
  g.validate();
  return g;
}

// Streams one Glauber run and accumulates the time-weighted magnetization
// mean and histogram over [horizon/2, horizon] without recording the path.
struct MagnetizationStats {
  double mean = 0.0;
  Vec histogram;
};

MagnetizationStats glauber_second_half(const sim::GlauberIsingSpec& spec, double horizon,
                                       std::uint64_t seed, const GridBinning& bins) {
  sim::GlauberSimulator sim(spec, seed);
  const double t0 = 0.5 * horizon;
  Vec hist = Vec::Zero(bins.total_bins());
  double weighted_sum = 0.0;
  double prev_t = 0.0;
  double prev_m = sim.magnetization();
  auto account = [&](double upto) {
    const double lo = std::max(prev_t, t0);
    if (upto > lo) {
      const double w = upto - lo;
      weighted_sum += w * prev_m;
      hist(bins.index_of({&prev_m, 1})) += w;
    }
  };
  sim.advance_to(horizon, [&](double t, int) {
    account(t);
    prev_t = t;
    prev_m = sim.magnetization();
  });
  account(horizon);

  MagnetizationStats out;
  const double window = horizon - t0;
  out.mean = weighted_sum / window;
  out.histogram = hist / window;
  return out;
}

}  // namespace

InvisibilityReport invisibility_diagnostic(const sim::QuasiFellerDemoSpec& spec,
                                           const std::vector<double>& points,
                                           const std::vector<double>& deltas, std::int64_t steps,
                                           std::uint64_t seed) {
  sim::validate(sim::ProcessSpec{spec});
  if (points.empty()) throw std::domain_error("point set must be non-empty");
  if (deltas.empty()) throw std::domain_error("window widths must be non-empty");
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    if (!(deltas[i] > 0.0)) throw std::domain_error("window widths must be positive");
    if (i > 0 && !(deltas[i] < deltas[i - 1]))
      throw std::domain_error("window widths must strictly decrease");
  }
  if (steps < 1) throw std::domain_error("need at least one step");

  std::vector<std::int64_t> hits(deltas.size(), 0);
  sim::QuasiFellerChain chain(spec, seed);
  for (std::int64_t k = 0; k < steps; ++k) {
    const double x = chain.state();
    double dist = std::numeric_limits<double>::infinity();
    for (double p : points) dist = std::min(dist, std::abs(x - p));
    for (std::size_t i = 0; i < deltas.size(); ++i) {
      if (dist < deltas[i]) ++hits[i];
    }
    chain.step();
  }

  InvisibilityReport report;
  report.deltas = deltas;
  report.steps = steps;
  report.masses.resize(deltas.size());
  for (std::size_t i = 0; i < deltas.size(); ++i)
    report.masses[i] = static_cast<double>(hits[i]) / static_cast<double>(steps);
  return report;
}

std::vector<CoexistenceReport> coexistence_scan(int side, const std::vector<double>& betas,
                                                double horizon, double m_star,
                                                const std::vector<std::uint64_t>& seeds,
                                                const CoexistenceScanOptions& options) {
  if (side < 2) throw std::domain_error("lattice side must be >= 2");
  if (betas.empty()) throw std::domain_error("beta grid must be non-empty");
  for (double b : betas) {
    if (!(b >= 0.0)) throw std::domain_error("inverse temperatures must be >= 0");
  }
  if (!(m_star > 0.0 && m_star < 1.0)) throw std::domain_error("m_star must lie in (0,1)");
  if (seeds.empty()) throw std::domain_error("seed list must be non-empty");
  // The second-half window must leave room for at least one expected sweep.
  if (!(horizon >= 2.0)) throw std::domain_error("horizon too short for burn-in plus measurement");
  if (options.magnetization_bins < 2) throw std::domain_error("need at least two bins");

  const GridBinning bins = magnetization_binning(options.magnetization_bins);
  std::vector<CoexistenceReport> reports(betas.size() * seeds.size());
  const auto total = static_cast<std::int64_t>(reports.size());
  parallel_for(total, options.exec, [&](std::int64_t k) {
    const double beta = betas[static_cast<std::size_t>(k) / seeds.size()];
    const std::uint64_t seed = seeds[static_cast<std::size_t>(k) % seeds.size()];
    sim::GlauberIsingSpec plus{side, beta, sim::IsingInit::all_plus};
    sim::GlauberIsingSpec minus{side, beta, sim::IsingInit::all_minus};
    const auto stat_plus = glauber_second_half(plus, horizon, seed, bins);
    const auto stat_minus = glauber_second_half(minus, horizon, seed, bins);

    CoexistenceReport r;
    r.beta = beta;
    r.seed = seed;
    r.m_plus = stat_plus.mean;
    r.m_minus = stat_minus.mean;
    r.m_star = m_star;
    r.horizon = horizon;
    r.separated = stat_plus.mean >= m_star && stat_minus.mean <= -m_star;
    r.tv = 0.5 * (stat_plus.histogram - stat_minus.histogram).cwiseAbs().sum();
    reports[static_cast<std::size_t>(k)] = r;
  });
  return reports;
}

EscapeReport absorbing_diagnostic(int side, double beta, double alpha, double m_star,
                                  std::int64_t observations,
                                  const std::vector<std::uint64_t>& seeds, Exec exec) {
  if (side < 2) throw std::domain_error("lattice side must be >= 2");
  if (!(beta >= 0.0)) throw std::domain_error("inverse temperature must be >= 0");
  if (!(alpha > 0.0)) throw std::domain_error("subsampling rate must be positive");
  if (!(m_star > 0.0 && m_star < 1.0)) throw std::domain_error("m_star must lie in (0,1)");
  if (observations < 1) throw std::domain_error("need at least one observation");
  if (seeds.empty()) throw std::domain_error("seed list must be non-empty");

  EscapeReport report;
  report.beta = beta;
  report.alpha = alpha;
  report.m_star = m_star;
  report.observations = observations;
  report.rows.resize(seeds.size());

  const sim::ExpSubsampleSpec sub{alpha, observations};
  parallel_for(static_cast<std::int64_t>(seeds.size()), exec, [&](std::int64_t i) {
    const std::uint64_t seed = seeds[static_cast<std::size_t>(i)];
    sim::GlauberIsingSpec plus{side, beta, sim::IsingInit::all_plus};
    sim::GlauberIsingSpec minus{side, beta, sim::IsingInit::all_minus};
    const auto obs_plus = sim::exp_subsample(sim::ProcessSpec{plus}, sub, seed);
    const auto obs_minus = sim::exp_subsample(sim::ProcessSpec{minus}, sub, seed);
    std::int64_t crossed_plus = 0, crossed_minus = 0;
    for (double m : obs_plus) {
      if (m <= -m_star) ++crossed_plus;
    }
    for (double m : obs_minus) {
      if (m >= m_star) ++crossed_minus;
    }
    auto& row = report.rows[static_cast<std::size_t>(i)];
    row.seed = seed;
    row.from_plus = static_cast<double>(crossed_plus) / static_cast<double>(observations);
    row.from_minus = static_cast<double>(crossed_minus) / static_cast<double>(observations);
  });

  std::vector<double> fp(report.rows.size()), fm(report.rows.size());
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    fp[i] = report.rows[i].from_plus;
    fm[i] = report.rows[i].from_minus;
  }
  report.mean_from_plus = pairwise_mean(fp);
  report.mean_from_minus = pairwise_mean(fm);
  return report;
}

}  // namespace ergolab::lab
