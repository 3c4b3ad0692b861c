#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

#include "ergolab/cli/runner.hpp"
#include "ergolab/version.hpp"

namespace {

int do_validate(const std::string& config_path, bool quiet) {
  const auto outcome = ergolab::cli::validate_config_file(config_path);
  if (!outcome.ok()) {
    for (const auto& e : outcome.errors)
      std::cerr << (e.path.empty() ? std::string("<config>") : e.path) << ": " << e.message << "\n";
    return 1;
  }
  if (!quiet) std::cout << outcome.config->resolved.dump(2) << "\n";
  return 0;
}

int do_run(const std::string& config_path) {
  const auto outcome = ergolab::cli::validate_config_file(config_path);
  if (!outcome.ok()) {
    for (const auto& e : outcome.errors)
      std::cerr << (e.path.empty() ? std::string("<config>") : e.path) << ": " << e.message << "\n";
    return 1;
  }
  try {
    const auto manifest = ergolab::cli::run_experiment(*outcome.config);
    for (const auto& op : manifest.operations) {
      std::cout << op.status << "\t" << op.op;
      if (!op.message.empty()) std::cout << "\t" << op.message;
      std::cout << "\n";
    }
    std::cout << "manifest\t" << (outcome.config->output_dir() / "manifest.json").string() << "\n";
    return manifest.all_ok() ? 0 : 2;
  } catch (const std::exception& e) {
    std::cerr << "run failed: " << e.what() << "\n";
    return 2;
  }
}

int do_report(const std::string& manifest_path, const std::string& format) {
  try {
    std::cout << ergolab::cli::render_report(manifest_path,
                                             ergolab::cli::parse_report_format(format));
    return 0;
  } catch (const std::domain_error& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ergolab: invariant-measure experiments on Markov generators and samplers"};
  app.set_version_flag("--version", ergolab::kToolVersion);
  app.require_subcommand(1);

  std::string config_path, manifest_path, format = "text";
  bool quiet = false;

  auto* validate = app.add_subcommand("validate", "check a config and print its resolved form");
  validate->add_option("config", config_path, "experiment config (JSON)")->required();
  validate->add_flag("-q,--quiet", quiet, "suppress the resolved config on success");

  auto* run = app.add_subcommand("run", "execute a config and write artifacts plus manifest");
  run->add_option("config", config_path, "experiment config (JSON)")->required();

  auto* report = app.add_subcommand("report", "render a report from a run manifest");
  report->add_option("manifest", manifest_path, "manifest.json produced by run")->required();
  report->add_option("--format", format, "text | json | csv")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  if (validate->parsed()) return do_validate(config_path, quiet);
  if (run->parsed()) return do_run(config_path);
  if (report->parsed()) return do_report(manifest_path, format);
  return 1;
}
