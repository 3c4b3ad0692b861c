#pragma once

#include <optional>

#include "ergolab/rng.hpp"
#include "ergolab/sim/path.hpp"
#include "ergolab/sim/process.hpp"

namespace ergolab::sim {

// Exact jump-chain sampler (holding time, then target draw, in that fixed
// order).  `replica` selects an independent noise substream.
class CtmcSimulator {
 public:
  CtmcSimulator(const FiniteCtmcSpec& spec, std::uint64_t seed, std::uint64_t replica = 0);

  double time() const { return time_; }
  int state() const { return state_; }

  // Processes all jumps up to t; the state is then the value at time t.
  // Returns the jump times and post-jump states encountered, in order.
  void advance_to(double t, const std::function<void(double, int)>& on_jump = nullptr);

 private:
  const kernel::RateMatrix* rates_;
  int state_;
  double time_ = 0.0;
  std::optional<double> pending_jump_;
  CounterRng rng_;
  double draw_holding();
  int draw_target();
};

// Fixed-step Euler scheme for the isotropic diffusion; also integrates the
// kinetic pair when built from a LangevinSpec.  States live on the grid
// k * step and are read out as the previous grid value between grid points.
class EulerSimulator {
 public:
  EulerSimulator(const EllipticDiffusionSpec& spec, std::uint64_t seed, std::uint64_t replica = 0);
  EulerSimulator(const LangevinSpec& spec, std::uint64_t seed, std::uint64_t replica = 0);

  double time() const { return static_cast<double>(steps_) * step_; }
  std::span<const double> state() const { return {x_.data(), x_.size()}; }

  // Runs grid steps while (steps + 1) * step <= t.  Throws simulation_error
  // with the first bad timestamp if the state leaves finite range.
  void advance_to(double t, const std::function<void(double, std::span<const double>)>& on_step = nullptr);

 private:
  std::function<void(std::span<const double>, std::span<double>)> rhs_drift_;
  std::function<double(std::span<const double>)> noise_amp_;  // per-coordinate amplitude
  int noise_dim_;   // trailing coordinates receiving noise
  double step_;
  std::vector<double> x_, drift_buf_;
  std::int64_t steps_ = 0;
  CounterRng rng_;
  void do_step();
};

// Heat-bath single-flip dynamics via Poisson thinning: candidate times arrive
// at rate side*side, a uniformly chosen site flips with probability equal to
// its heat-bath rate (always <= 1).  Exact in distribution, O(1) memory.
class GlauberSimulator {
 public:
  GlauberSimulator(const GlauberIsingSpec& spec, std::uint64_t seed, std::uint64_t replica = 0);

  double time() const { return time_; }
  int side() const { return side_; }
  double magnetization() const { return static_cast<double>(spin_sum_) / static_cast<double>(n_); }
  const std::vector<signed char>& spins() const { return spins_; }

  // Advances to t, invoking on_flip(time, site) after each accepted flip.
  void advance_to(double t, const std::function<void(double, int)>& on_flip = nullptr);

  // Heat-bath flip rate of site i in the current configuration.
  double flip_rate(int site) const;

  // Configuration packed into bits (requires side*side <= 64).
  std::uint64_t config_code() const;

 private:
  int side_, n_;
  double beta_;
  std::vector<signed char> spins_;
  long spin_sum_;
  double time_ = 0.0;
  CounterRng rng_;
  int neighbor_sum(int site) const;
};

// One transition of the discrete-time demo chain.  Throws std::domain_error
// if x lies outside [0, 1].
double quasi_feller_demo_step(double x, const QuasiFellerDemoSpec& spec, CounterRng& rng);

// The post-jump location map H of the demo chain (the discontinuous part).
double quasi_feller_demo_center(double x, const QuasiFellerDemoSpec& spec);

class QuasiFellerChain {
 public:
  QuasiFellerChain(const QuasiFellerDemoSpec& spec, std::uint64_t seed, std::uint64_t replica = 0);
  double state() const { return x_; }
  std::int64_t steps() const { return steps_; }
  void step();

 private:
  QuasiFellerDemoSpec spec_;
  double x_;
  std::int64_t steps_ = 0;
  CounterRng rng_;
};

// Simulates one trajectory over [0, horizon] and records it.  Event-driven
// processes record every event; grid schemes record every grid point; the
// demo chain records unit-time steps.  Deterministic in (spec, seed).
SamplePath simulate(const ProcessSpec& spec, double horizon, std::uint64_t seed,
                    std::uint64_t replica = 0);

// Runs `count` independent replicas of f(replica_index); under Exec::openmp
// the replicas run in parallel with identical results (replica-indexed
// substreams).
void map_replicas(std::int64_t count, Exec exec, const std::function<void(std::int64_t)>& f);

}  // namespace ergolab::sim
