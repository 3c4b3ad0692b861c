#include "ergolab/sim/path.hpp"

#include <nlohmann/json.hpp>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ergolab::sim {

void SamplePath::append(double t, std::span<const double> x) {
  if (static_cast<int>(x.size()) != dim) throw std::domain_error("sample dimension mismatch");
  times.push_back(t);
  states.insert(states.end(), x.begin(), x.end());
}

std::span<const double> SamplePath::state_at(double t) const {
  if (times.empty()) throw std::domain_error("empty path");
  if (t < times.front() || t > times.back()) throw std::domain_error("time outside recorded range");
  // Last index with times[i] <= t.
  auto it = std::upper_bound(times.begin(), times.end(), t);
  const std::size_t idx = static_cast<std::size_t>(it - times.begin()) - 1;
  return state(idx);
}

void SamplePath::validate() const {
  if (dim < 1) throw std::domain_error("path dimension must be >= 1");
  if (times.empty()) throw std::domain_error("path must contain at least one sample");
  if (states.size() != times.size() * static_cast<std::size_t>(dim))
    throw std::domain_error("state array size disagrees with times");
  if (times.front() != 0.0) throw std::domain_error("paths start at time 0");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!std::isfinite(times[i])) throw std::domain_error("non-finite timestamp");
    if (i > 0 && !(times[i] > times[i - 1])) throw std::domain_error("timestamps must strictly increase");
  }
  for (double s : states) {
    if (!std::isfinite(s)) throw std::domain_error("non-finite state");
  }
}

void write_csv(const SamplePath& path, const std::filesystem::path& file) {
  std::ofstream out(file);
  if (!out) throw std::runtime_error("cannot open for writing: " + file.string());
  out.precision(17);
  out << "t";
  for (int d = 0; d < path.dim; ++d) out << ",x" << d;
  out << "\n";
  for (std::size_t i = 0; i < path.size(); ++i) {
    out << path.times[i];
    const auto x = path.state(i);
    for (double v : x) out << "," << v;
    out << "\n";
  }
  if (!out) throw std::runtime_error("write failed: " + file.string());
}

void write_sidecar(const SamplePath& path, const std::filesystem::path& file,
                   const std::string& spec_json_text, double horizon) {
  nlohmann::json j{{"processId", path.process_id},
                   {"seed", path.seed},
                   {"horizon", horizon},
                   {"dim", path.dim},
                   {"samples", path.size()},
                   {"spec", nlohmann::json::parse(spec_json_text)}};
  std::ofstream out(file);
  if (!out) throw std::runtime_error("cannot open for writing: " + file.string());
  out << j.dump(2) << "\n";
}

}  // namespace ergolab::sim
