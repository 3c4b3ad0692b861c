#include "ergolab/sim/simulate.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "ergolab/exec.hpp"

namespace ergolab::sim {

CtmcSimulator::CtmcSimulator(const FiniteCtmcSpec& spec, std::uint64_t seed, std::uint64_t replica)
    : rates_(&spec.rates),
      state_(spec.x0),
      rng_(seed, CounterRng::substream(streams::path, replica)) {
  if (spec.x0 < 0 || spec.x0 >= spec.rates.size())
    throw std::domain_error("initial state out of range");
}

double CtmcSimulator::draw_holding() {
  const double exit_rate = -rates_->rate(state_, state_);
  if (exit_rate <= 0.0) return std::numeric_limits<double>::infinity();
  return rng_.exponential(exit_rate);
}

int CtmcSimulator::draw_target() {
  const double exit_rate = -rates_->rate(state_, state_);
  const double u = rng_.uniform() * exit_rate;
  double acc = 0.0;
  int last_positive = -1;
  for (int j = 0; j < rates_->size(); ++j) {
    if (j == state_) continue;
    const double r = rates_->rate(state_, j);
    if (r > 0.0) {
      acc += r;
      last_positive = j;
      if (u <= acc) return j;
    }
  }
  // u == exit_rate up to round-off: take the last positive-rate target.
  return last_positive;
}

void CtmcSimulator::advance_to(double t, const std::function<void(double, int)>& on_jump) {
  if (t < time_) throw std::domain_error("cannot advance backwards");
  while (true) {
    if (!pending_jump_) {
      const double hold = draw_holding();
      pending_jump_ = time_ + hold;
    }
    if (*pending_jump_ > t) {
      time_ = t;
      return;
    }
    time_ = *pending_jump_;
    pending_jump_.reset();
    state_ = draw_target();
    if (on_jump) on_jump(time_, state_);
  }
}

EulerSimulator::EulerSimulator(const EllipticDiffusionSpec& spec, std::uint64_t seed,
                               std::uint64_t replica)
    : rhs_drift_(spec.drift),
      noise_amp_(spec.sigma),
      noise_dim_(spec.dim),
      step_(spec.step),
      x_(spec.x0),
      drift_buf_(spec.dim, 0.0),
      rng_(seed, CounterRng::substream(streams::path, replica)) {
  validate(ProcessSpec{spec});
}

EulerSimulator::EulerSimulator(const LangevinSpec& spec, std::uint64_t seed, std::uint64_t replica)
    : noise_dim_(spec.dim),
      step_(spec.step),
      drift_buf_(2 * spec.dim, 0.0),
      rng_(seed, CounterRng::substream(streams::path, replica)) {
  validate(ProcessSpec{spec});
  x_ = spec.x0;
  x_.insert(x_.end(), spec.v0.begin(), spec.v0.end());
  const double sigma = spec.sigma;
  noise_amp_ = [sigma](std::span<const double>) { return sigma; };
  rhs_drift_ = [gp = spec.grad_potential, gamma = spec.gamma, d = spec.dim,
                grad = std::vector<double>(static_cast<std::size_t>(spec.dim), 0.0)](
                   std::span<const double> xv, std::span<double> out) mutable {
    gp(xv.first(static_cast<std::size_t>(d)), std::span<double>(grad));
    for (int i = 0; i < d; ++i) out[i] = xv[static_cast<std::size_t>(d + i)];
    for (int i = 0; i < d; ++i)
      out[static_cast<std::size_t>(d + i)] = -grad[static_cast<std::size_t>(i)] - gamma * xv[static_cast<std::size_t>(d + i)];
  };
}

void EulerSimulator::do_step() {
  rhs_drift_(std::span<const double>(x_), std::span<double>(drift_buf_));
  const double amp = noise_amp_(std::span<const double>(x_));
  const double sqh = std::sqrt(step_);
  for (std::size_t i = 0; i < x_.size(); ++i) x_[i] += step_ * drift_buf_[i];
  const std::size_t offset = x_.size() - static_cast<std::size_t>(noise_dim_);
  for (std::size_t i = 0; i < static_cast<std::size_t>(noise_dim_); ++i)
    x_[offset + i] += amp * sqh * rng_.normal();
  ++steps_;
  for (double v : x_) {
    if (!std::isfinite(v)) {
      std::ostringstream os;
      os << "state left finite range at t = " << time();
      throw simulation_error(os.str());
    }
  }
}

void EulerSimulator::advance_to(double t,
                                const std::function<void(double, std::span<const double>)>& on_step) {
  while ((static_cast<double>(steps_) + 1.0) * step_ <= t) {
    do_step();
    if (on_step) on_step(time(), state());
  }
}

GlauberSimulator::GlauberSimulator(const GlauberIsingSpec& spec, std::uint64_t seed,
                                   std::uint64_t replica)
    : side_(spec.side),
      n_(spec.side * spec.side),
      beta_(spec.beta),
      rng_(seed, CounterRng::substream(streams::path, replica)) {
  validate(ProcessSpec{spec});
  spins_.assign(static_cast<std::size_t>(n_), 1);
  if (spec.init == IsingInit::all_minus) {
    spins_.assign(static_cast<std::size_t>(n_), -1);
  } else if (spec.init == IsingInit::random_iid) {
    for (auto& s : spins_) s = rng_.uniform_int(2) == 0 ? -1 : 1;
  }
  spin_sum_ = 0;
  for (signed char s : spins_) spin_sum_ += s;
}

int GlauberSimulator::neighbor_sum(int site) const {
  const int r = site / side_;
  const int c = site % side_;
  const int up = ((r + side_ - 1) % side_) * side_ + c;
  const int down = ((r + 1) % side_) * side_ + c;
  const int left = r * side_ + (c + side_ - 1) % side_;
  const int right = r * side_ + (c + 1) % side_;
  return spins_[up] + spins_[down] + spins_[left] + spins_[right];
}

double GlauberSimulator::flip_rate(int site) const {
  if (site < 0 || site >= n_) throw std::domain_error("site out of range");
  const double h = static_cast<double>(neighbor_sum(site));
  const double s = static_cast<double>(spins_[static_cast<std::size_t>(site)]);
  // Heat-bath rate; always in (0, 1), so thinning against intensity n is
  // exact.
  return 1.0 / (1.0 + std::exp(2.0 * beta_ * s * h));
}

void GlauberSimulator::advance_to(double t, const std::function<void(double, int)>& on_flip) {
  if (t < time_) throw std::domain_error("cannot advance backwards");
  while (true) {
    const double dt = rng_.exponential(static_cast<double>(n_));
    if (time_ + dt > t) {
      time_ = t;
      return;
    }
    time_ += dt;
    const int site = static_cast<int>(rng_.uniform_int(static_cast<std::uint64_t>(n_)));
    const double rate = flip_rate(site);
    if (rng_.uniform() <= rate) {
      auto& s = spins_[static_cast<std::size_t>(site)];
      spin_sum_ -= 2 * s;
      s = static_cast<signed char>(-s);
      if (on_flip) on_flip(time_, site);
    }
  }
}

std::uint64_t GlauberSimulator::config_code() const {
  if (n_ > 64) throw std::domain_error("configuration code needs side*side <= 64");
  std::uint64_t code = 0;
  for (int i = 0; i < n_; ++i) {
    if (spins_[static_cast<std::size_t>(i)] > 0) code |= (1ull << i);
  }
  return code;
}

double quasi_feller_demo_center(double x, const QuasiFellerDemoSpec& spec) {
  return x < spec.discontinuity ? 0.5 * x : 0.5 * (1.0 + x);
}

double quasi_feller_demo_step(double x, const QuasiFellerDemoSpec& spec, CounterRng& rng) {
  if (!(x >= 0.0 && x <= 1.0)) {
    std::ostringstream os;
    os << "demo chain state " << x << " outside [0,1]";
    throw std::domain_error(os.str());
  }
  if (rng.uniform_co() < spec.uniform_weight) return rng.uniform_co();
  const double c = quasi_feller_demo_center(x, spec);
  // Symmetric triangular kernel about c, rejected onto [0,1]; the loop
  // terminates a.s. because the kernel always overlaps the interval.
  while (true) {
    const double t = c + spec.half_width * (rng.uniform_co() + rng.uniform_co() - 1.0);
    if (t >= 0.0 && t <= 1.0) return t;
  }
}

QuasiFellerChain::QuasiFellerChain(const QuasiFellerDemoSpec& spec, std::uint64_t seed,
                                   std::uint64_t replica)
    : spec_(spec), x_(spec.x0), rng_(seed, CounterRng::substream(streams::path, replica)) {
  validate(ProcessSpec{spec});
}

void QuasiFellerChain::step() {
  x_ = quasi_feller_demo_step(x_, spec_, rng_);
  ++steps_;
}

SamplePath simulate(const ProcessSpec& spec, double horizon, std::uint64_t seed,
                    std::uint64_t replica) {
  if (!(horizon > 0.0)) throw std::domain_error("horizon must be positive");
  validate(spec);

  SamplePath path;
  path.dim = sample_dim(spec);
  path.seed = seed;
  path.process_id = process_id(spec);

  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, FiniteCtmcSpec>) {
          CtmcSimulator sim(s, seed, replica);
          double x = static_cast<double>(sim.state());
          path.append(0.0, {&x, 1});
          sim.advance_to(horizon, [&](double t, int st) {
            const double v = static_cast<double>(st);
            path.append(t, {&v, 1});
          });
          if (path.times.back() < horizon) {
            const double v = static_cast<double>(sim.state());
            path.append(horizon, {&v, 1});
          }
        } else if constexpr (std::is_same_v<T, EllipticDiffusionSpec> ||
                             std::is_same_v<T, LangevinSpec>) {
          EulerSimulator sim(s, seed, replica);
          path.append(0.0, sim.state());
          sim.advance_to(horizon,
                         [&](double t, std::span<const double> x) { path.append(t, x); });
          if (path.times.back() < horizon) path.append(horizon, sim.state());
        } else if constexpr (std::is_same_v<T, GlauberIsingSpec>) {
          GlauberSimulator sim(s, seed, replica);
          double m = sim.magnetization();
          path.append(0.0, {&m, 1});
          sim.advance_to(horizon, [&](double t, int) {
            const double v = sim.magnetization();
            path.append(t, {&v, 1});
          });
          if (path.times.back() < horizon) {
            m = sim.magnetization();
            path.append(horizon, {&m, 1});
          }
        } else if constexpr (std::is_same_v<T, QuasiFellerDemoSpec>) {
          QuasiFellerChain chain(s, seed, replica);
          double x = chain.state();
          path.append(0.0, {&x, 1});
          const auto steps = static_cast<std::int64_t>(std::floor(horizon));
          for (std::int64_t k = 1; k <= steps; ++k) {
            chain.step();
            x = chain.state();
            path.append(static_cast<double>(k), {&x, 1});
          }
          if (path.times.back() < horizon) {
            x = chain.state();
            path.append(horizon, {&x, 1});
          }
        }
      },
      spec);

  path.validate();
  return path;
}

void map_replicas(std::int64_t count, Exec exec, const std::function<void(std::int64_t)>& f) {
  parallel_for(count, exec, f);
}

}  // namespace ergolab::sim
