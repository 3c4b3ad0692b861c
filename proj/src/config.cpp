#include "ergolab/cli/config.hpp"

#include <cstdlib>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "ergolab/cli/digest.hpp"
#include "ergolab/kernel/io.hpp"
#include "ergolab/sim/process.hpp"

namespace ergolab::cli {
namespace {

using nlohmann::json;

const std::set<std::string> kExactOps = {
    "semigroup",        "resolvent",           "invariant_measures",
    "check_invariance", "psi_irreducible",     "domination_certificate",
    "uniqueness_verdict", "absorbing_decomposition", "skeleton_cesaro"};

const std::set<std::string> kMonteCarloOps = {
    "simulate",        "exp_subsample",           "occupation_measure",
    "drift_check",     "invisibility_diagnostic", "coexistence_scan",
    "absorbing_diagnostic"};

struct Checker {
  std::vector<ValidationError>& errors;

  void err(const std::string& path, const std::string& message) {
    errors.push_back({path, message});
  }

  bool require_number(const json& j, const std::string& path, const char* key, bool required,
                      double lo, bool lo_strict, double hi, bool hi_strict) {
    if (!j.contains(key)) {
      if (required) err(path + "/" + key, "missing required number");
      return false;
    }
    const auto& v = j.at(key);
    if (!v.is_number()) {
      err(path + "/" + key, "must be a number");
      return false;
    }
    const double x = v.get<double>();
    const bool lo_ok = lo_strict ? x > lo : x >= lo;
    const bool hi_ok = hi_strict ? x < hi : x <= hi;
    if (!lo_ok || !hi_ok) {
      std::ostringstream os;
      os << "value " << x << " outside " << (lo_strict ? "(" : "[") << lo << ", " << hi
         << (hi_strict ? ")" : "]");
      err(path + "/" + key, os.str());
      return false;
    }
    return true;
  }

  bool require_integer(const json& j, const std::string& path, const char* key, bool required,
                       std::int64_t lo) {
    if (!j.contains(key)) {
      if (required) err(path + "/" + key, "missing required integer");
      return false;
    }
    const auto& v = j.at(key);
    if (!v.is_number_integer() && !v.is_number_unsigned()) {
      err(path + "/" + key, "must be an integer");
      return false;
    }
    if (v.get<std::int64_t>() < lo) {
      std::ostringstream os;
      os << "must be >= " << lo;
      err(path + "/" + key, os.str());
      return false;
    }
    return true;
  }

  void check_unknown_keys(const json& j, const std::string& path,
                          const std::set<std::string>& known) {
    for (const auto& [key, value] : j.items()) {
      (void)value;
      if (!known.count(key)) err(path + "/" + key, "unknown field");
    }
  }
};

constexpr double kInf = std::numeric_limits<double>::infinity();

// Per-op known fields, requiredness, and ranges; fills defaults in place.
void validate_operation(json& op, const std::string& path, Checker& ck) {
  const std::string name = op.value("op", "");
  if (name.empty()) {
    ck.err(path + "/op", "missing operation name");
    return;
  }
  if (!kExactOps.count(name) && !kMonteCarloOps.count(name)) {
    ck.err(path + "/op", "unknown operation: " + name);
    return;
  }

  auto known = [&](std::initializer_list<const char*> keys) {
    std::set<std::string> s{"op"};
    for (const char* k : keys) s.insert(k);
    ck.check_unknown_keys(op, path, s);
  };

  if (name == "semigroup") {
    known({"t"});
    ck.require_number(op, path, "t", true, 0.0, false, kInf, true);
  } else if (name == "resolvent") {
    known({"alpha"});
    ck.require_number(op, path, "alpha", true, 0.0, true, kInf, true);
  } else if (name == "invariant_measures") {
    known({});
  } else if (name == "check_invariance") {
    known({"alpha", "tolerance", "measure"});
    if (!op.contains("alpha")) op["alpha"] = 1.0;
    ck.require_number(op, path, "alpha", true, 0.0, true, kInf, true);
    if (!op.contains("tolerance")) op["tolerance"] = 1e-8;
    ck.require_number(op, path, "tolerance", true, 0.0, true, kInf, true);
    if (op.contains("measure") && !op["measure"].is_array())
      ck.err(path + "/measure", "must be an array of weights");
  } else if (name == "psi_irreducible" || name == "domination_certificate" ||
             name == "uniqueness_verdict") {
    known({"alpha", "psi"});
    if (name != "psi_irreducible") {
      if (!op.contains("alpha")) op["alpha"] = 1.0;
      ck.require_number(op, path, "alpha", true, 0.0, true, kInf, true);
    } else if (op.contains("alpha")) {
      ck.err(path + "/alpha", "unknown field");
    }
    if (op.contains("psi") && !op["psi"].is_array())
      ck.err(path + "/psi", "must be an array of weights");
  } else if (name == "absorbing_decomposition") {
    known({"alpha", "muPlus", "muMinus"});
    if (!op.contains("alpha")) op["alpha"] = 1.0;
    ck.require_number(op, path, "alpha", true, 0.0, true, kInf, true);
    for (const char* key : {"muPlus", "muMinus"}) {
      if (op.contains(key) && !op[key].is_array())
        ck.err(path + "/" + key, "must be an array of weights");
    }
    if (op.contains("muPlus") != op.contains("muMinus"))
      ck.err(path, "muPlus and muMinus must be given together");
  } else if (name == "skeleton_cesaro") {
    known({"s", "x0", "n"});
    ck.require_number(op, path, "s", true, 0.0, true, kInf, true);
    ck.require_integer(op, path, "n", true, 1);
    if (op.contains("x0")) ck.require_integer(op, path, "x0", true, 0);
  } else if (name == "simulate") {
    known({"horizon", "persistPath"});
    ck.require_number(op, path, "horizon", true, 0.0, true, kInf, true);
    if (!op.contains("persistPath")) op["persistPath"] = true;
    if (!op["persistPath"].is_boolean()) ck.err(path + "/persistPath", "must be a boolean");
  } else if (name == "exp_subsample") {
    known({"alpha", "count"});
    ck.require_number(op, path, "alpha", true, 0.0, true, kInf, true);
    ck.require_integer(op, path, "count", true, 1);
  } else if (name == "occupation_measure") {
    known({"horizon", "bins", "tightnessRadii"});
    ck.require_number(op, path, "horizon", true, 0.0, true, kInf, true);
    if (!op.contains("bins")) op["bins"] = 64;
    ck.require_integer(op, path, "bins", true, 1);
    if (op.contains("tightnessRadii")) {
      const auto& radii = op["tightnessRadii"];
      if (!radii.is_array() || radii.empty()) {
        ck.err(path + "/tightnessRadii", "must be a non-empty array");
      } else {
        double prev = 0.0;
        for (std::size_t i = 0; i < radii.size(); ++i) {
          if (!radii[i].is_number() || !(radii[i].get<double>() > prev)) {
            ck.err(path + "/tightnessRadii", "must be strictly increasing positive numbers");
            break;
          }
          prev = radii[i].get<double>();
        }
      }
    }
  } else if (name == "drift_check") {
    known({"testFunction", "boxLo", "boxHi", "compactRadius", "outlierBudget", "samplesPerAxis",
           "analytic", "fdHorizon", "fdReplicas"});
    if (!op.contains("testFunction")) op["testFunction"] = "quadratic";
    if (!op["testFunction"].is_string() ||
        (op["testFunction"] != "quadratic" && op["testFunction"] != "energy"))
      ck.err(path + "/testFunction", "must be \"quadratic\" or \"energy\"");
    for (const char* key : {"boxLo", "boxHi"}) {
      if (!op.contains(key) || !op[key].is_array() || op[key].empty())
        ck.err(path + "/" + key, "missing required coordinate array");
    }
    if (op.contains("boxLo") && op.contains("boxHi") && op["boxLo"].is_array() &&
        op["boxHi"].is_array() && op["boxLo"].size() != op["boxHi"].size())
      ck.err(path + "/boxHi", "must match boxLo in length");
    if (!op.contains("compactRadius")) op["compactRadius"] = 0.5;
    ck.require_number(op, path, "compactRadius", true, 0.0, false, kInf, true);
    if (!op.contains("outlierBudget")) op["outlierBudget"] = 0.0;
    ck.require_number(op, path, "outlierBudget", true, 0.0, false, 0.5, true);
    if (!op.contains("samplesPerAxis")) op["samplesPerAxis"] = 41;
    ck.require_integer(op, path, "samplesPerAxis", true, 2);
    if (!op.contains("analytic")) op["analytic"] = false;
    if (!op["analytic"].is_boolean()) ck.err(path + "/analytic", "must be a boolean");
    if (!op.contains("fdHorizon")) op["fdHorizon"] = 1e-3;
    ck.require_number(op, path, "fdHorizon", true, 0.0, true, kInf, true);
    if (!op.contains("fdReplicas")) op["fdReplicas"] = 1000;
    ck.require_integer(op, path, "fdReplicas", true, 1);
  } else if (name == "invisibility_diagnostic") {
    known({"points", "deltas", "steps"});
    if (op.contains("points")) {
      if (!op["points"].is_array() || op["points"].empty())
        ck.err(path + "/points", "must be a non-empty array");
    }
    if (!op.contains("deltas")) op["deltas"] = json::array({0.1, 0.01});
    const auto& deltas = op["deltas"];
    if (!deltas.is_array() || deltas.empty()) {
      ck.err(path + "/deltas", "must be a non-empty array");
    } else {
      double prev = kInf;
      for (std::size_t i = 0; i < deltas.size(); ++i) {
        if (!deltas[i].is_number() || !(deltas[i].get<double>() > 0.0) ||
            !(deltas[i].get<double>() < prev)) {
          ck.err(path + "/deltas", "must be strictly decreasing positive numbers");
          break;
        }
        prev = deltas[i].get<double>();
      }
    }
    if (!op.contains("steps")) op["steps"] = 1000000;
    ck.require_integer(op, path, "steps", true, 1);
  } else if (name == "coexistence_scan") {
    known({"side", "betas", "horizon", "mStar", "bins"});
    ck.require_integer(op, path, "side", true, 2);
    if (!op.contains("betas") || !op["betas"].is_array() || op["betas"].empty()) {
      ck.err(path + "/betas", "missing required array of inverse temperatures");
    } else {
      for (std::size_t i = 0; i < op["betas"].size(); ++i) {
        if (!op["betas"][i].is_number() || op["betas"][i].get<double>() < 0.0) {
          ck.err(path + "/betas", "entries must be numbers >= 0");
          break;
        }
      }
    }
    ck.require_number(op, path, "horizon", true, 2.0, false, kInf, true);
    if (!op.contains("mStar")) op["mStar"] = 0.5;
    ck.require_number(op, path, "mStar", true, 0.0, true, 1.0, true);
    if (!op.contains("bins")) op["bins"] = 32;
    ck.require_integer(op, path, "bins", true, 2);
  } else if (name == "absorbing_diagnostic") {
    known({"side", "beta", "alpha", "mStar", "observations"});
    ck.require_integer(op, path, "side", true, 2);
    ck.require_number(op, path, "beta", true, 0.0, false, kInf, true);
    ck.require_number(op, path, "alpha", true, 0.0, true, kInf, true);
    if (!op.contains("mStar")) op["mStar"] = 0.5;
    ck.require_number(op, path, "mStar", true, 0.0, true, 1.0, true);
    if (!op.contains("observations")) op["observations"] = 1000;
    ck.require_integer(op, path, "observations", true, 1);
  }
}

// Process requirements per op; assumes the op itself already validated.
void check_process_requirements(const json& op, const std::string& path,
                                const std::optional<std::string>& process_kind, Checker& ck) {
  const std::string name = op.value("op", "");
  if (name.empty()) return;
  if (kExactOps.count(name)) {
    if (!process_kind) {
      ck.err(path, "operation " + name + " needs a process block");
    } else if (*process_kind != "finite-ctmc") {
      ck.err(path, "operation " + name + " needs a finite-ctmc process, got " + *process_kind);
    }
    return;
  }
  if (name == "simulate" || name == "exp_subsample" || name == "occupation_measure") {
    if (!process_kind) ck.err(path, "operation " + name + " needs a process block");
  } else if (name == "drift_check") {
    if (!process_kind ||
        (*process_kind != "elliptic-diffusion" && *process_kind != "langevin")) {
      ck.err(path, "operation drift_check needs an elliptic-diffusion or langevin process");
    }
  } else if (name == "invisibility_diagnostic") {
    if (!process_kind || *process_kind != "quasi-feller-demo")
      ck.err(path, "operation invisibility_diagnostic needs a quasi-feller-demo process");
  }
  // coexistence_scan and absorbing_diagnostic carry their own lattice spec.
}

}  // namespace

bool is_exact_op(const std::string& op) { return kExactOps.count(op) > 0; }
bool is_montecarlo_op(const std::string& op) { return kMonteCarloOps.count(op) > 0; }

std::vector<std::uint64_t> ExperimentConfig::seeds() const {
  std::vector<std::uint64_t> out;
  for (const auto& s : resolved.at("seeds")) out.push_back(s.get<std::uint64_t>());
  return out;
}

std::string ExperimentConfig::hash() const { return sha256_hex(canonical()); }

ValidationOutcome validate_config_json(const nlohmann::json& raw,
                                       const std::filesystem::path& base_dir) {
  ValidationOutcome outcome;
  Checker ck{outcome.errors};

  if (!raw.is_object()) {
    ck.err("", "config must be a JSON object");
    return outcome;
  }
  ck.check_unknown_keys(raw, "",
                        {"name", "engine", "process", "operations", "seeds", "outputDir"});

  json resolved = json::object();

  // name
  const std::string name = raw.value("name", "");
  if (name.empty()) {
    ck.err("/name", "missing or empty");
  } else if (name.find('/') != std::string::npos || name.find('\\') != std::string::npos ||
             name.find("..") != std::string::npos) {
    ck.err("/name", "must not contain path separators");
  }
  resolved["name"] = name;

  // engine
  const std::string engine = raw.value("engine", "");
  if (engine != "exact" && engine != "montecarlo" && engine != "combined")
    ck.err("/engine", "must be \"exact\", \"montecarlo\", or \"combined\"");
  resolved["engine"] = engine;

  // process (optional; resolved by inlining any rates file)
  std::optional<std::string> process_kind;
  if (raw.contains("process")) {
    json proc = raw["process"];
    if (!proc.is_object()) {
      ck.err("/process", "must be an object");
    } else {
      if (proc.contains("ratesFile")) {
        const std::string ref = proc["ratesFile"].get<std::string>();
        std::filesystem::path p = ref;
        if (p.is_relative()) p = base_dir / p;
        if (!std::filesystem::exists(p)) {
          ck.err("/process/ratesFile", "file not found: " + p.string());
        } else {
          try {
            const auto gen = kernel::io::rate_matrix_from_file(p);
            proc["rates"] = kernel::io::rate_matrix_to_json(gen)["rates"];
            proc.erase("ratesFile");
          } catch (const std::exception& e) {
            ck.err("/process/ratesFile", e.what());
          }
        }
      }
      if (!proc.contains("ratesFile")) {
        try {
          const auto spec = sim::spec_from_json(proc);
          process_kind = sim::process_kind(spec);
          proc = sim::spec_to_json(spec);  // normalized, defaults expanded
        } catch (const std::exception& e) {
          ck.err("/process", e.what());
        }
      }
      resolved["process"] = proc;
    }
  }

  // operations
  json ops = json::array();
  bool any_mc = false;
  if (!raw.contains("operations") || !raw["operations"].is_array() || raw["operations"].empty()) {
    ck.err("/operations", "must be a non-empty array");
  } else {
    int idx = 0;
    for (const auto& raw_op : raw["operations"]) {
      std::ostringstream path;
      path << "/operations/" << idx;
      json op = raw_op;
      if (!op.is_object()) {
        ck.err(path.str(), "must be an object");
        ++idx;
        continue;
      }
      validate_operation(op, path.str(), ck);
      const std::string op_name = op.value("op", "");
      if (is_exact_op(op_name) && engine == "montecarlo")
        ck.err(path.str(), "exact operation not allowed under the montecarlo engine");
      if (is_montecarlo_op(op_name)) {
        any_mc = true;
        if (engine == "exact")
          ck.err(path.str(), "sampling operation not allowed under the exact engine");
      }
      check_process_requirements(op, path.str(), process_kind, ck);
      ops.push_back(std::move(op));
      ++idx;
    }
  }
  resolved["operations"] = ops;

  // seeds
  json seeds = raw.value("seeds", json::array());
  if (!seeds.is_array()) {
    ck.err("/seeds", "must be an array");
    seeds = json::array();
  } else {
    for (std::size_t i = 0; i < seeds.size(); ++i) {
      if (!seeds[i].is_number_integer() && !seeds[i].is_number_unsigned()) {
        std::ostringstream sp;
        sp << "/seeds/" << i;
        ck.err(sp.str(), "must be an integer");
      } else if (seeds[i].is_number_integer() && seeds[i].get<std::int64_t>() < 0) {
        std::ostringstream sp;
        sp << "/seeds/" << i;
        ck.err(sp.str(), "must be >= 0");
      }
    }
  }
  if ((engine == "montecarlo" || (engine == "combined" && any_mc)) && seeds.empty())
    ck.err("/seeds", "sampling operations need at least one explicit seed");
  resolved["seeds"] = seeds;

  // outputDir (environment override wins)
  std::string out_dir = raw.value("outputDir", "");
  if (const char* env = std::getenv("ERGOLAB_OUTPUT_DIR"); env != nullptr && *env != '\0')
    out_dir = env;
  if (out_dir.empty()) out_dir = (std::filesystem::path("out") / name).string();
  resolved["outputDir"] = out_dir;

  if (!outcome.errors.empty()) return outcome;
  outcome.config = ExperimentConfig{std::move(resolved)};
  return outcome;
}

ValidationOutcome validate_config_file(const std::filesystem::path& file) {
  ValidationOutcome outcome;
  std::ifstream in(file);
  if (!in) {
    outcome.errors.push_back({"", "cannot open config file: " + file.string()});
    return outcome;
  }
  json raw;
  try {
    in >> raw;
  } catch (const std::exception& e) {
    outcome.errors.push_back({"", std::string("config is not valid JSON: ") + e.what()});
    return outcome;
  }
  return validate_config_json(raw, file.parent_path());
}

}  // namespace ergolab::cli
