#include "ergolab/sim/subsample.hpp"

#include <sstream>

namespace ergolab::sim {
namespace {

void check_sub(const ExpSubsampleSpec& sub) {
  if (!(sub.alpha > 0.0)) throw std::domain_error("subsampling rate must be positive");
  if (sub.count < 1) throw std::domain_error("subsample count must be >= 1");
}

// Collects one observation per clock tick from any simulator exposing
// advance_to + a snapshot call.
template <class Advance, class Snapshot>
std::vector<double> collect(const ExpSubsampleSpec& sub, CounterRng& clocks, int dim,
                            Advance&& advance, Snapshot&& snapshot) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(sub.count) * static_cast<std::size_t>(dim));
  double s = 0.0;
  for (std::int64_t k = 0; k < sub.count; ++k) {
    s += clocks.exponential(sub.alpha);
    advance(s);
    snapshot(out);
  }
  return out;
}

}  // namespace

std::vector<double> exp_subsample(const ProcessSpec& spec, const ExpSubsampleSpec& sub,
                                  std::uint64_t seed, std::uint64_t replica) {
  check_sub(sub);
  validate(spec);
  CounterRng clocks(seed, CounterRng::substream(streams::clocks, replica));
  const int dim = sample_dim(spec);

  return std::visit(
      [&](const auto& s) -> std::vector<double> {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, FiniteCtmcSpec>) {
          CtmcSimulator sim(s, seed, replica);
          return collect(
              sub, clocks, dim, [&](double t) { sim.advance_to(t); },
              [&](std::vector<double>& out) { out.push_back(static_cast<double>(sim.state())); });
        } else if constexpr (std::is_same_v<T, EllipticDiffusionSpec> ||
                             std::is_same_v<T, LangevinSpec>) {
          EulerSimulator sim(s, seed, replica);
          return collect(
              sub, clocks, dim, [&](double t) { sim.advance_to(t); },
              [&](std::vector<double>& out) {
                const auto x = sim.state();
                out.insert(out.end(), x.begin(), x.end());
              });
        } else if constexpr (std::is_same_v<T, GlauberIsingSpec>) {
          GlauberSimulator sim(s, seed, replica);
          return collect(
              sub, clocks, dim, [&](double t) { sim.advance_to(t); },
              [&](std::vector<double>& out) { out.push_back(sim.magnetization()); });
        } else {
          // Demo chain: clock times land between integer steps; observe the
          // state after floor(t) transitions.
          QuasiFellerChain chain(s, seed, replica);
          return collect(
              sub, clocks, dim,
              [&](double t) {
                while (static_cast<double>(chain.steps() + 1) <= t) chain.step();
              },
              [&](std::vector<double>& out) { out.push_back(chain.state()); });
        }
      },
      spec);
}

std::vector<double> exp_subsample(const SamplePath& path, const ExpSubsampleSpec& sub,
                                  std::uint64_t seed, std::uint64_t replica) {
  check_sub(sub);
  path.validate();
  CounterRng clocks(seed, CounterRng::substream(streams::clocks, replica));
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(sub.count) * static_cast<std::size_t>(path.dim));
  double s = 0.0;
  for (std::int64_t k = 0; k < sub.count; ++k) {
    s += clocks.exponential(sub.alpha);
    if (s > path.times.back()) {
      std::ostringstream os;
      os << "clock time " << s << " exceeds the recorded horizon " << path.times.back()
         << " after " << k << " observations";
      throw std::range_error(os.str());
    }
    const auto x = path.state_at(s);
    out.insert(out.end(), x.begin(), x.end());
  }
  return out;
}

std::vector<double> exp_subsample_replicas(const ProcessSpec& spec, const ExpSubsampleSpec& sub,
                                           std::uint64_t seed, std::int64_t replicas, Exec exec) {
  check_sub(sub);
  validate(spec);
  if (replicas < 1) throw std::domain_error("replica count must be >= 1");
  const int dim = sample_dim(spec);
  std::vector<double> out(static_cast<std::size_t>(replicas) * static_cast<std::size_t>(dim));
  map_replicas(replicas, exec, [&](std::int64_t r) {
    const auto obs = exp_subsample(spec, sub, seed, static_cast<std::uint64_t>(r));
    const std::size_t last = obs.size() - static_cast<std::size_t>(dim);
    for (int d = 0; d < dim; ++d)
      out[static_cast<std::size_t>(r) * dim + static_cast<std::size_t>(d)] = obs[last + static_cast<std::size_t>(d)];
  });
  return out;
}

}  // namespace ergolab::sim
