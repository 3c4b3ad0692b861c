#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace ergolab::sim {

// Piecewise-constant record of one trajectory: the state at times[i] holds on
// [times[i], times[i+1]).  Event-driven processes store every jump; fixed-step
// schemes store every grid point.  The final sample always sits at the
// requested horizon, so the record covers [0, horizon] with no extrapolation.
struct SamplePath {
  int dim = 1;
  std::vector<double> times;
  std::vector<double> states;  // size() * dim, row-major
  std::uint64_t seed = 0;
  std::string process_id;

  std::size_t size() const { return times.size(); }
  std::span<const double> state(std::size_t i) const {
    return {states.data() + i * static_cast<std::size_t>(dim), static_cast<std::size_t>(dim)};
  }
  double duration() const { return times.empty() ? 0.0 : times.back() - times.front(); }

  void append(double t, std::span<const double> x);

  // State in effect at time t (previous-value lookup); t must lie within
  // [times.front(), times.back()].
  std::span<const double> state_at(double t) const;

  // Invariants: strictly increasing finite times starting at 0, finite
  // states, consistent sizes.  Throws std::domain_error on violation.
  void validate() const;
};

// CSV with header t,x0,...,x{dim-1}; 17 significant digits (round-trip safe).
void write_csv(const SamplePath& path, const std::filesystem::path& file);

// JSON sidecar carrying everything needed to regenerate the path: the
// process spec (as serialized by spec_to_json), seed, and horizon.
void write_sidecar(const SamplePath& path, const std::filesystem::path& file,
                   const std::string& spec_json_text, double horizon);

}  // namespace ergolab::sim
