#pragma once

#include <nlohmann/json.hpp>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace ergolab::cli {

struct ValidationError {
  std::string path;  // JSON-pointer-style location
  std::string message;
};

// Fully resolved experiment description: defaults expanded, file references
// inlined, output directory fixed.  The resolved JSON is the canonical form
// hashed into run manifests.
struct ExperimentConfig {
  nlohmann::json resolved;

  std::string name() const { return resolved.at("name").get<std::string>(); }
  std::string engine() const { return resolved.at("engine").get<std::string>(); }
  const nlohmann::json& operations() const { return resolved.at("operations"); }
  std::vector<std::uint64_t> seeds() const;
  std::filesystem::path output_dir() const {
    return resolved.at("outputDir").get<std::string>();
  }
  bool has_process() const { return resolved.contains("process"); }
  const nlohmann::json& process() const { return resolved.at("process"); }

  // Canonical serialization (sorted keys, no whitespace) and its SHA-256.
  std::string canonical() const { return resolved.dump(); }
  std::string hash() const;
};

struct ValidationOutcome {
  std::optional<ExperimentConfig> config;
  std::vector<ValidationError> errors;
  bool ok() const { return errors.empty() && config.has_value(); }
};

// Validates and resolves a config.  Collects every error it can find rather
// than stopping at the first; on any error the outcome carries no config.
// Relative file references resolve against base_dir.  ERGOLAB_OUTPUT_DIR, if
// set, overrides the output directory.
ValidationOutcome validate_config_json(const nlohmann::json& raw,
                                       const std::filesystem::path& base_dir);
ValidationOutcome validate_config_file(const std::filesystem::path& file);

// Operation catalog: which engine class each op belongs to.
bool is_exact_op(const std::string& op);
bool is_montecarlo_op(const std::string& op);

}  // namespace ergolab::cli
