#pragma once

#include "ergolab/cli/config.hpp"

namespace ergolab::cli {

struct ArtifactRecord {
  std::string path;  // relative to the output directory
  std::string sha256;
  std::uint64_t bytes = 0;
};

struct OperationRecord {
  std::string op;
  std::string status;  // "ok" | "error" | "skipped"
  std::string message;
  std::vector<ArtifactRecord> artifacts;
};

struct RunManifest {
  std::string config_name;
  std::string config_hash;
  std::string tool_version;
  std::string started_at;   // ISO-8601 UTC
  std::string finished_at;
  std::vector<OperationRecord> operations;

  bool all_ok() const;
  nlohmann::json to_json() const;
  static RunManifest from_json(const nlohmann::json& j);
};

// Executes every operation of a validated config, writing one or more
// artifacts per operation into the output directory plus a manifest.json.
// A failing operation is recorded (status "error", exception message) without
// aborting independent operations; operations that depend on a failed
// simulation are marked "skipped".  All writes go through a temp-file rename
// so partial artifacts never appear under their final name, and artifact
// names never leave the output directory.
RunManifest run_experiment(const ExperimentConfig& config);

enum class ReportFormat { text, json, csv };

// Renders a run report from a manifest file.  Verifies every recorded
// artifact digest first and throws integrity_error naming the first
// mismatching file.  json is lossless (embeds each JSON artifact); csv
// concatenates tabular artifacts; text is a one-line-per-operation summary.
std::string render_report(const std::filesystem::path& manifest_file, ReportFormat format);

ReportFormat parse_report_format(const std::string& name);

}  // namespace ergolab::cli
