#pragma once

#include <nlohmann/json.hpp>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ergolab/kernel/types.hpp"

namespace ergolab::sim {

using VecFn = std::function<void(std::span<const double>, std::span<double>)>;
using ScalarFn = std::function<double(std::span<const double>)>;

// Finite-state jump process with the given generator, started at x0.
struct FiniteCtmcSpec {
  kernel::RateMatrix rates;
  int x0 = 0;
};

// dX = b(X) dt + sigma(X) dW (isotropic noise), integrated with a fixed-step
// Euler scheme.  sigma must stay above a declared ellipticity floor
// sigma_min > 0.  Named presets keep specs serializable; `drift` may also be
// any callable for library use (then `preset` is empty and the spec cannot
// be serialized).
struct EllipticDiffusionSpec {
  int dim = 1;
  VecFn drift;
  ScalarFn sigma;
  double sigma_min = 0.0;
  double step = 0.01;
  std::vector<double> x0;
  std::string preset;  // "ou" | "double-well" | "brownian" | "drift-to-zero" | ""
  nlohmann::json params;
};

// Kinetic pair dX = V dt, dV = (-grad U(X) - gamma V) dt + sigma dW.  State
// is the concatenation [x, v].
struct LangevinSpec {
  int dim = 1;  // spatial dimension; the path has 2*dim coordinates
  VecFn grad_potential;
  ScalarFn potential;
  double gamma = 1.0;
  double sigma = 1.0;
  double step = 0.01;
  std::vector<double> x0, v0;
  std::string preset;  // "harmonic" | "double-well" | ""
  nlohmann::json params;
};

enum class IsingInit { all_plus, all_minus, random_iid };

// Single-spin-flip heat-bath dynamics on a side x side torus at inverse
// temperature beta.  A spin flips at rate 1/(1 + exp(2 beta s_i h_i)) with
// h_i the sum of the four neighbor spins; total flip intensity is bounded by
// the site count, which drives the exact thinning sampler.
struct GlauberIsingSpec {
  int side = 16;
  double beta = 1.0;
  IsingInit init = IsingInit::all_plus;
};

// Discrete-time mixture chain on [0, 1]: with probability 1/2 jump uniformly,
// otherwise jump near H(x) where H has a jump discontinuity; the transition
// law is continuous in x away from that point and the chain still admits a
// smooth invariant measure.  Used to exercise estimators on a process whose
// kernel is only almost-everywhere continuous.
struct QuasiFellerDemoSpec {
  double x0 = 0.25;
  double discontinuity = 0.5;   // location of the jump of H
  double half_width = 0.25;     // triangular kernel half-width
  double uniform_weight = 0.5;  // mixture weight of the uniform component
};

using ProcessSpec = std::variant<FiniteCtmcSpec, EllipticDiffusionSpec, LangevinSpec,
                                 GlauberIsingSpec, QuasiFellerDemoSpec>;

// Kind tag used in JSON and in process ids.
std::string process_kind(const ProcessSpec& spec);

// Stable identifier: kind plus the defining parameters.
std::string process_id(const ProcessSpec& spec);

// Dimension of one recorded sample (Ising paths record magnetization only).
int sample_dim(const ProcessSpec& spec);

// Throws std::domain_error on invalid parameters (non-positive step, missing
// callables, dimension mismatches, beta < 0, ...).
void validate(const ProcessSpec& spec);

// Named drift/potential presets; throws std::domain_error on unknown names.
EllipticDiffusionSpec make_elliptic_preset(const std::string& name, int dim, double sigma,
                                           double step, std::vector<double> x0);
LangevinSpec make_langevin_preset(const std::string& name, int dim, double gamma, double sigma,
                                  double step, std::vector<double> x0, std::vector<double> v0);

// JSON round-trip for serializable specs (preset-based diffusions, CTMCs,
// Ising, demo chain).  spec_to_json throws std::domain_error for specs built
// around unnamed callables.
nlohmann::json spec_to_json(const ProcessSpec& spec);
ProcessSpec spec_from_json(const nlohmann::json& j);

}  // namespace ergolab::sim
