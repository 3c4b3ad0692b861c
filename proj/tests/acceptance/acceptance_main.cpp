// End-to-end acceptance gates: ten fixed-seed checks covering the kernel
// algebra, the samplers, and the measure lab, each printed as one PASS/FAIL
// line with its runtime.  Exit code 0 iff every gate passes.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "ergolab/kernel/ops.hpp"
#include "ergolab/kernel/structure.hpp"
#include "ergolab/lab/diagnostics.hpp"
#include "ergolab/lab/drift.hpp"
#include "ergolab/lab/estimators.hpp"
#include "ergolab/rng.hpp"
#include "ergolab/sim/subsample.hpp"
#include "oracles.hpp"

using namespace ergolab;

namespace {

double inf_norm(const Vec& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3g", x);
  return buf;
}

// A measure is fixed by the generator iff it is fixed by the resolvent, at
// every rate.  Candidates for the forward direction come from the library's
// invariant measures, for the reverse direction from the left fixed vectors
// of the resolvent (signed vectors are fine: both sides are linear).
bool gate_resolvent_fixed_points(std::string& detail) {
  CounterRng rng(1001, 0);
  const double alphas[] = {0.1, 1.0, 10.0};
  double worst_forward = 0.0, worst_reverse = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + static_cast<int>(rng.uniform_int(19));
    const Mat l = (trial % 2 == 0) ? oracles::random_rate_matrix(n, rng)
                                   : oracles::random_irreducible(n, rng);
    const kernel::RateMatrix gen(l);
    const auto measures = kernel::invariant_measures(gen);
    for (const double alpha : alphas) {
      const auto r = kernel::resolvent(gen, alpha);
      int forward = 0, reverse = 0;
      for (const auto& mu : measures) {
        const Vec& w = mu.weights();
        if (inf_norm(l.transpose() * w) > 1e-10) continue;
        ++forward;
        worst_forward = std::max(worst_forward, inf_norm(r.apply_left(w) - w));
      }
      const Mat fixed = oracles::null_space((r.p() - Mat::Identity(n, n)).transpose());
      for (Eigen::Index c = 0; c < fixed.cols(); ++c) {
        Vec w = fixed.col(c);
        w /= w.cwiseAbs().maxCoeff();
        if (inf_norm(r.apply_left(w) - w) > 1e-10) continue;
        ++reverse;
        worst_reverse = std::max(worst_reverse, inf_norm(l.transpose() * w));
      }
      if (forward == 0 || reverse == 0) {
        detail = "no candidate measure satisfied the premise";
        return false;
      }
    }
  }
  detail = "residuals " + num(worst_forward) + " forward, " + num(worst_reverse) + " reverse";
  return worst_forward <= 1e-8 && worst_reverse <= 1e-8;
}

// Irreducible generators give resolvents with strictly positive rows, and the
// counting measure is dominated on every row.
bool gate_resolvent_positivity(std::string& detail) {
  CounterRng rng(1002, 0);
  double smallest = 1.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + static_cast<int>(rng.uniform_int(19));
    const kernel::RateMatrix gen(oracles::random_irreducible(n, rng));
    for (const double alpha : {0.1, 1.0, 10.0}) {
      const auto r = kernel::resolvent(gen, alpha);
      for (int i = 0; i < n; ++i) {
        const double rel = r.p().row(i).minCoeff() / r.p().row(i).maxCoeff();
        smallest = std::min(smallest, rel);
      }
      const auto cert = kernel::domination_certificate(gen, kernel::DiscreteMeasure::counting(n), alpha);
      if (!cert.holds || !cert.support_consequence.value_or(false)) {
        detail = "domination certificate failed on an irreducible generator";
        return false;
      }
    }
  }
  detail = "smallest relative entry " + num(smallest);
  return smallest > 1e-12;
}

// The number of invariant measures equals the number of closed classes:
// irreducible generators give one, k-class constructions give k with a
// justified cross-class domination witness, and all 729 three-state
// generators with rates in {0, 1, 2} agree with the null-space oracle.
bool gate_class_counting(std::string& detail) {
  CounterRng rng(1003, 0);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 2 + static_cast<int>(rng.uniform_int(19));
    const kernel::RateMatrix gen(oracles::random_irreducible(n, rng));
    if (kernel::invariant_measures(gen).size() != 1) {
      detail = "irreducible generator did not yield one invariant measure";
      return false;
    }
  }
  for (int trial = 0; trial < 30; ++trial) {
    const int k = 2 + trial % 3;
    std::vector<int> sizes(static_cast<std::size_t>(k));
    for (auto& s : sizes) s = 1 + static_cast<int>(rng.uniform_int(3));
    const int transient = static_cast<int>(rng.uniform_int(3));
    const Mat l = oracles::closed_class_generator(sizes, transient, rng);
    const kernel::RateMatrix gen(l);
    if (static_cast<int>(kernel::invariant_measures(gen).size()) != k) {
      detail = "class construction with " + std::to_string(k) + " classes miscounted";
      return false;
    }
    const auto cert =
        kernel::domination_certificate(gen, kernel::DiscreteMeasure::counting(gen.size()), 1.0);
    if (cert.holds || !cert.witness.has_value()) {
      detail = "multi-class generator was not rejected with a witness";
      return false;
    }
    const auto reach = oracles::reach_table(l);
    if (reach[static_cast<std::size_t>(cert.witness->first)]
             [static_cast<std::size_t>(cert.witness->second)]) {
      detail = "witness pair is actually reachable";
      return false;
    }
  }
  for (int code = 0; code < 729; ++code) {
    Mat l = Mat::Zero(3, 3);
    int rem = code;
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        if (i == j) continue;
        l(i, j) = static_cast<double>(rem % 3);
        rem /= 3;
      }
      l(i, i) = -l.row(i).sum();
    }
    const kernel::RateMatrix gen(l);
    const int lib = static_cast<int>(kernel::invariant_measures(gen).size());
    const int oracle = oracles::null_dimension(l.transpose());
    if (lib != oracle || lib != oracles::closed_class_count(l)) {
      detail = "grid generator " + std::to_string(code) + ": library " + std::to_string(lib) +
               ", oracle " + std::to_string(oracle);
      return false;
    }
  }
  detail = "729 grid generators agree with the null-space oracle";
  return true;
}

// Two mutually singular invariant measures split the space into disjoint
// resolvent-absorbing sets that are fixed points of one further shrink round
// and carry the full mass of their measures.
bool gate_absorbing_split(std::string& detail) {
  CounterRng rng(1004, 0);
  for (int trial = 0; trial < 50; ++trial) {
    const std::vector<int> sizes{1 + static_cast<int>(rng.uniform_int(4)),
                                 1 + static_cast<int>(rng.uniform_int(4))};
    const int transient = 1 + static_cast<int>(rng.uniform_int(3));
    const Mat l = oracles::closed_class_generator(sizes, transient, rng);
    const kernel::RateMatrix gen(l);
    const auto measures = kernel::invariant_measures(gen);
    if (measures.size() != 2) {
      detail = "expected exactly two invariant measures";
      return false;
    }
    const auto dec = kernel::absorbing_decomposition(gen, measures[0], measures[1], 1.0);

    std::vector<int> hits(static_cast<std::size_t>(gen.size()), 0);
    for (const auto* part : {&dec.b_plus, &dec.b_minus, &dec.residual})
      for (const int x : *part) ++hits[static_cast<std::size_t>(x)];
    if (std::any_of(hits.begin(), hits.end(), [](int h) { return h != 1; })) {
      detail = "sets do not partition the state space";
      return false;
    }

    const auto r = kernel::resolvent(gen, 1.0);
    const auto shrink = [&](const std::vector<int>& set) {
      std::vector<int> kept;
      for (const int x : set) {
        double mass = 0.0;
        for (const int y : set) mass += r(x, y);
        if (mass >= 1.0 - 1e-10) kept.push_back(x);
      }
      return kept;
    };
    if (shrink(dec.b_plus) != dec.b_plus || shrink(dec.b_minus) != dec.b_minus) {
      detail = "a split set lost states under one further shrink round";
      return false;
    }
    if (measures[0].mass_on(dec.b_plus) < 1.0 - 1e-10 ||
        measures[1].mass_on(dec.b_minus) < 1.0 - 1e-10) {
      detail = "an invariant measure leaks mass off its set";
      return false;
    }
  }
  detail = "50 two-class splits verified";
  return true;
}

// The subsampled chain's one-step law from state 0 matches the resolvent row:
// for the symmetric two-state chain at rate 2 the return mass is exactly 3/4.
bool gate_subsampled_law(std::string& detail) {
  const sim::ProcessSpec spec{sim::FiniteCtmcSpec{kernel::RateMatrix(oracles::sym2()), 0}};
  const auto finals = sim::exp_subsample_replicas(spec, {2.0, 1}, 2024, 100000);
  const auto zeros = std::count(finals.begin(), finals.end(), 0.0);
  const double p = static_cast<double>(zeros) / static_cast<double>(finals.size());
  detail = "observed return mass " + num(p) + " against 0.75";
  return p >= 0.74 && p <= 0.76;
}

// Long-run occupation statistics settle at the stationary law: total
// variation for the two-state chain, the stationary variance for the kinetic
// oscillator.
bool gate_occupation_limits(std::string& detail) {
  const sim::ProcessSpec ctmc{sim::FiniteCtmcSpec{kernel::RateMatrix(oracles::sym2()), 0}};
  const auto path = sim::simulate(ctmc, 100000.0, 7);
  const auto occ = lab::occupation_measure(path, lab::FiniteBinning{2});
  lab::EmpiricalMeasure flat;
  flat.binning = lab::FiniteBinning{2};
  flat.weights = Vec::Constant(2, 0.5);
  flat.normalizer = 1.0;
  const double tv = lab::tv_distance(occ, flat);
  if (!(tv < 0.02)) {
    detail = "two-state occupation is off by TV " + num(tv);
    return false;
  }

  const auto lg = sim::make_langevin_preset("harmonic", 1, 1.0, std::sqrt(2.0), 0.01, {0.0}, {0.0});
  const auto lpath = sim::simulate(sim::ProcessSpec{lg}, 10000.0, 10);
  double sum = 0.0, sq = 0.0;
  for (std::size_t i = 0; i < lpath.size(); ++i) {
    const double x = lpath.state(i)[0];
    sum += x;
    sq += x * x;
  }
  const double m = sum / static_cast<double>(lpath.size());
  const double var = sq / static_cast<double>(lpath.size()) - m * m;
  detail = "TV " + num(tv) + ", oscillator variance " + num(var);
  return var >= 0.95 && var <= 1.05;
}

// The drift fit certifies the mean-reverting well (estimated generator) and
// rejects driftless motion, whose decay slope is exactly zero.
bool gate_drift_verdicts(std::string& detail) {
  const auto v = [](std::span<const double> x) { return 1.0 + x[0] * x[0]; };
  const lab::SampleBox box{{-3.0}, {3.0}};

  const auto ou = sim::make_elliptic_preset("ou", 1, std::sqrt(2.0), 1e-3, {0.0});
  lab::DriftCheckOptions fitted;
  fitted.fd_replicas = 100000;
  fitted.seed = 5;
  const auto well = lab::lyapunov_drift_check(sim::ProcessSpec{ou}, v, box, fitted);
  if (!well.passing || well.c < 0.9 || well.big_c > 3.5) {
    detail = "well report c " + num(well.c) + ", C " + num(well.big_c);
    return false;
  }

  const auto bm = sim::make_elliptic_preset("brownian", 1, std::sqrt(2.0), 1e-3, {0.0});
  lab::DriftCheckOptions exact;
  exact.analytic_generator = [](std::span<const double>) { return 2.0; };
  const auto flat = lab::lyapunov_drift_check(sim::ProcessSpec{bm}, v, box, exact);
  detail = "well c " + num(well.c) + " C " + num(well.big_c) + ", driftless c " + num(flat.c);
  return !flat.passing;
}

// Shrinking windows around the transition law's discontinuity carry mass
// proportional to their width: the ratio across one decade is near ten and
// both masses sit under the width times the stationary density bound.
bool gate_invisible_discontinuity(std::string& detail) {
  const sim::QuasiFellerDemoSpec spec;
  const auto report =
      lab::invisibility_diagnostic(spec, {spec.discontinuity}, {0.1, 0.01}, 1000000, 3);
  const double ratio = report.masses[0] / report.masses[1];
  // The stationary density is at most 0.5 + 0.5 * 4 = 2.5 (uniform part plus
  // the triangular peak), plus estimation slack.
  const double bound = 2.0 * (2.5 + 0.2);
  detail = "masses " + num(report.masses[0]) + " / " + num(report.masses[1]) + ", ratio " +
           num(ratio);
  return ratio >= 7.0 && ratio <= 13.0 && report.masses[0] < bound * 0.1 &&
         report.masses[1] < bound * 0.01;
}

// Hot lattices forget their start (overlapping magnetization histograms);
// cold lattices stay magnetized and the subsampled chain never crosses to the
// opposite phase.
bool gate_phase_separation(std::string& detail) {
  const std::vector<std::uint64_t> seeds{1, 2};
  const auto reports = lab::coexistence_scan(16, {0.2, 1.0}, 10000.0, 0.5, seeds);
  for (const auto& r : reports) {
    if (r.beta < 0.5) {
      if (r.separated || r.tv >= 0.05) {
        detail = "hot run (seed " + std::to_string(r.seed) + ") tv " + num(r.tv);
        return false;
      }
    } else {
      if (!r.separated || r.m_plus <= 0.9 || r.m_minus >= -0.9) {
        detail = "cold run (seed " + std::to_string(r.seed) + ") m " + num(r.m_plus) + " / " +
                 num(r.m_minus);
        return false;
      }
    }
  }
  const auto escape = lab::absorbing_diagnostic(16, 1.0, 1.0, 0.5, 1000, seeds);
  detail = "cold escape frequencies " + num(escape.mean_from_plus) + " / " +
           num(escape.mean_from_minus);
  return escape.mean_from_plus == 0.0 && escape.mean_from_minus == 0.0;
}

// Cesaro averages of the skeleton obey the telescoping defect bound 2/n at
// every length, for any generator and any skeleton period.
bool gate_cesaro_defect(std::string& detail) {
  CounterRng rng(1010, 0);
  double worst_margin = 1.0;
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + static_cast<int>(rng.uniform_int(11));
    const Mat l = (trial % 2 == 0) ? oracles::random_rate_matrix(n, rng)
                                   : oracles::random_irreducible(n, rng);
    const kernel::RateMatrix gen(l);
    const double s = 0.2 + rng.uniform();
    const int x0 = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(n)));
    const auto ps = kernel::semigroup(gen, s);
    for (const std::int64_t steps : {1, 10, 100, 1000}) {
      const auto nu = kernel::skeleton_cesaro(gen, s, x0, steps);
      const double defect = inf_norm(ps.apply_left(nu.weights()) - nu.weights());
      const double bound = 2.0 / static_cast<double>(steps);
      if (defect > bound) {
        detail = "defect " + num(defect) + " above " + num(bound) + " at n " +
                 std::to_string(steps);
        return false;
      }
      worst_margin = std::min(worst_margin, (bound - defect) / bound);
    }
  }
  detail = "slimmest margin " + num(worst_margin) + " of the bound";
  return true;
}

}  // namespace

int main() {
  struct Gate {
    const char* name;
    bool (*run)(std::string&);
  };
  const Gate gates[] = {
      {"invariant measures are exactly the resolvent fixed points", gate_resolvent_fixed_points},
      {"irreducible resolvents stay positive and dominate counting", gate_resolvent_positivity},
      {"invariant dimension counts closed classes", gate_class_counting},
      {"two-phase split is disjoint, absorbing, and carries the mass", gate_absorbing_split},
      {"subsampled two-state law matches the resolvent row", gate_subsampled_law},
      {"occupation averages settle at the stationary law", gate_occupation_limits},
      {"drift fit certifies the well and rejects driftless motion", gate_drift_verdicts},
      {"discontinuity windows carry mass proportional to width", gate_invisible_discontinuity},
      {"cold lattice phases separate, hot phases mix, no escapes", gate_phase_separation},
      {"cesaro averages meet the two-over-n defect bound", gate_cesaro_defect},
  };

  int failures = 0;
  for (const auto& gate : gates) {
    const auto start = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = false;
    try {
      ok = gate.run(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("[%s] %-60s %6.2f s%s%s\n", ok ? "PASS" : "FAIL", gate.name, secs,
                detail.empty() ? "" : "  -- ", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
  }

  const auto total = static_cast<int>(std::size(gates));
  if (failures == 0) {
    std::printf("all %d gates passed\n", total);
    return 0;
  }
  std::printf("%d of %d gates failed\n", failures, total);
  return 1;
}
