#include "ergolab/cli/runner.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <sstream>

#include "ergolab/cli/digest.hpp"
#include "ergolab/kernel/io.hpp"
#include "ergolab/kernel/ops.hpp"
#include "ergolab/kernel/structure.hpp"
#include "ergolab/lab/diagnostics.hpp"
#include "ergolab/lab/drift.hpp"
#include "ergolab/lab/estimators.hpp"
#include "ergolab/sim/subsample.hpp"
#include "ergolab/version.hpp"

namespace ergolab::cli {
namespace {

using nlohmann::json;

std::string iso_utc_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// All artifact writes go through here: temp file in the same directory, then
// an atomic rename, so a crash never leaves a half-written artifact under a
// final name.
class ArtifactWriter {
 public:
  explicit ArtifactWriter(std::filesystem::path out_dir) : out_dir_(std::move(out_dir)) {
    std::filesystem::create_directories(out_dir_);
  }

  const std::filesystem::path& dir() const { return out_dir_; }

  ArtifactRecord write_text(const std::string& rel_name, const std::string& content) {
    return write_with(rel_name, [&](const std::filesystem::path& tmp) {
      std::ofstream out(tmp, std::ios::binary);
      if (!out) throw std::runtime_error("cannot open for writing: " + tmp.string());
      out << content;
      if (!out) throw std::runtime_error("write failed: " + tmp.string());
    });
  }

  ArtifactRecord write_with(const std::string& rel_name,
                            const std::function<void(const std::filesystem::path&)>& producer) {
    if (rel_name.empty() || rel_name.find('/') != std::string::npos ||
        rel_name.find('\\') != std::string::npos || rel_name.front() == '.')
      throw std::logic_error("artifact names must be plain file names: " + rel_name);
    static std::atomic<std::uint64_t> counter{0};
    const std::filesystem::path tmp =
        out_dir_ / (".tmp-" + std::to_string(counter.fetch_add(1)) + "-" + rel_name);
    producer(tmp);
    const std::filesystem::path final_path = out_dir_ / rel_name;
    std::filesystem::rename(tmp, final_path);
    ArtifactRecord rec;
    rec.path = rel_name;
    rec.sha256 = sha256_file(final_path);
    rec.bytes = static_cast<std::uint64_t>(std::filesystem::file_size(final_path));
    return rec;
  }

 private:
  std::filesystem::path out_dir_;
};

std::string dump_json(const json& j) { return j.dump(2) + "\n"; }

std::string artifact_stem(int index, const std::string& op) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%02d", index);
  return std::string(buf) + "_" + op;
}

kernel::RateMatrix generator_from(const json& process) {
  return kernel::io::rate_matrix_from_json(json{{"rates", process.at("rates")}});
}

kernel::DiscreteMeasure psi_from(const json& op, int n) {
  if (op.contains("psi")) return kernel::io::measure_from_json(op.at("psi"), false);
  return kernel::DiscreteMeasure::counting(n);
}

// One operation's execution: returns the artifacts it wrote.
std::vector<ArtifactRecord> execute_operation(const json& op, int index,
                                              const ExperimentConfig& config,
                                              const std::optional<sim::ProcessSpec>& process,
                                              ArtifactWriter& writer) {
  const std::string name = op.at("op").get<std::string>();
  const std::string stem = artifact_stem(index, name);
  std::vector<ArtifactRecord> artifacts;
  const auto seeds = config.seeds();

  auto need_process = [&]() -> const sim::ProcessSpec& {
    if (!process) throw std::runtime_error("process spec unavailable");
    return *process;
  };
  auto need_generator = [&]() { return generator_from(config.process()); };

  if (name == "semigroup") {
    const auto k = kernel::semigroup(need_generator(), op.at("t").get<double>());
    artifacts.push_back(writer.write_text(stem + ".json", dump_json(kernel::io::kernel_to_json(k))));
  } else if (name == "resolvent") {
    const auto k = kernel::resolvent(need_generator(), op.at("alpha").get<double>());
    artifacts.push_back(writer.write_text(stem + ".json", dump_json(kernel::io::kernel_to_json(k))));
  } else if (name == "invariant_measures") {
    const auto measures = kernel::invariant_measures(need_generator());
    json arr = json::array();
    for (const auto& mu : measures) arr.push_back(kernel::io::measure_to_json(mu));
    artifacts.push_back(writer.write_text(
        stem + ".json",
        dump_json(json{{"count", measures.size()}, {"measures", std::move(arr)}})));
  } else if (name == "check_invariance") {
    const auto gen = need_generator();
    kernel::DiscreteMeasure mu =
        op.contains("measure") ? kernel::io::measure_from_json(op.at("measure"), true)
                               : [&] {
                                   const auto ms = kernel::invariant_measures(gen);
                                   return ms.front();
                                 }();
    const auto check = kernel::check_invariance_equivalence(gen, mu, op.at("alpha").get<double>(),
                                                            op.at("tolerance").get<double>());
    json j = kernel::io::invariance_check_to_json(check);
    j["measure"] = kernel::io::measure_to_json(mu);
    artifacts.push_back(writer.write_text(stem + ".json", dump_json(j)));
  } else if (name == "psi_irreducible") {
    const auto gen = need_generator();
    const auto psi = psi_from(op, gen.size());
    const bool irr = kernel::psi_irreducible(gen, psi);
    artifacts.push_back(writer.write_text(
        stem + ".json", dump_json(json{{"irreducible", irr},
                                       {"psi", op.contains("psi") ? op.at("psi")
                                                                  : json("counting")}})));
  } else if (name == "domination_certificate") {
    const auto gen = need_generator();
    const auto cert =
        kernel::domination_certificate(gen, psi_from(op, gen.size()), op.at("alpha").get<double>());
    artifacts.push_back(
        writer.write_text(stem + ".json", dump_json(kernel::io::domination_to_json(cert))));
  } else if (name == "uniqueness_verdict") {
    const auto gen = need_generator();
    const auto report =
        kernel::uniqueness_verdict(gen, psi_from(op, gen.size()), op.at("alpha").get<double>());
    artifacts.push_back(
        writer.write_text(stem + ".json", dump_json(kernel::io::uniqueness_to_json(report))));
  } else if (name == "absorbing_decomposition") {
    const auto gen = need_generator();
    kernel::DiscreteMeasure mu_plus = kernel::DiscreteMeasure::counting(1);
    kernel::DiscreteMeasure mu_minus = mu_plus;
    if (op.contains("muPlus")) {
      mu_plus = kernel::io::measure_from_json(op.at("muPlus"), true);
      mu_minus = kernel::io::measure_from_json(op.at("muMinus"), true);
    } else {
      const auto measures = kernel::invariant_measures(gen);
      if (measures.size() < 2)
        throw std::runtime_error("needs two invariant measures; generator has " +
                                 std::to_string(measures.size()));
      mu_plus = measures[0];
      mu_minus = measures[1];
    }
    const auto dec =
        kernel::absorbing_decomposition(gen, mu_plus, mu_minus, op.at("alpha").get<double>());
    json j = kernel::io::absorbing_to_json(dec);
    j["muPlus"] = kernel::io::measure_to_json(mu_plus);
    j["muMinus"] = kernel::io::measure_to_json(mu_minus);
    artifacts.push_back(writer.write_text(stem + ".json", dump_json(j)));
  } else if (name == "skeleton_cesaro") {
    const auto gen = need_generator();
    const int x0 = op.contains("x0") ? op.at("x0").get<int>() : config.process().value("x0", 0);
    const auto mu = kernel::skeleton_cesaro(gen, op.at("s").get<double>(), x0,
                                            op.at("n").get<std::int64_t>());
    artifacts.push_back(writer.write_text(
        stem + ".json",
        dump_json(json{{"s", op.at("s")},
                       {"x0", x0},
                       {"n", op.at("n")},
                       {"measure", kernel::io::measure_to_json(mu)}})));
  } else if (name == "simulate") {
    const double horizon = op.at("horizon").get<double>();
    const bool persist = op.at("persistPath").get<bool>();
    json summary = json::array();
    for (const auto seed : seeds) {
      const auto path = sim::simulate(need_process(), horizon, seed);
      summary.push_back(json{{"seed", seed},
                             {"samples", path.size()},
                             {"processId", path.process_id},
                             {"finalTime", path.times.back()}});
      if (persist) {
        const std::string csv_name = stem + "_seed" + std::to_string(seed) + ".csv";
        artifacts.push_back(writer.write_with(
            csv_name, [&](const std::filesystem::path& tmp) { sim::write_csv(path, tmp); }));
        const std::string sidecar_name = stem + "_seed" + std::to_string(seed) + ".meta.json";
        artifacts.push_back(writer.write_with(sidecar_name, [&](const std::filesystem::path& tmp) {
          sim::write_sidecar(path, tmp, sim::spec_to_json(need_process()).dump(), horizon);
        }));
      }
    }
    artifacts.push_back(writer.write_text(
        stem + ".json", dump_json(json{{"horizon", horizon}, {"runs", std::move(summary)}})));
  } else if (name == "exp_subsample") {
    const sim::ExpSubsampleSpec sub{op.at("alpha").get<double>(),
                                    op.at("count").get<std::int64_t>()};
    const int dim = sim::sample_dim(need_process());
    std::ostringstream csv;
    csv.precision(17);
    csv << "seed,k";
    for (int d = 0; d < dim; ++d) csv << ",x" << d;
    csv << "\n";
    for (const auto seed : seeds) {
      const auto obs = sim::exp_subsample(need_process(), sub, seed);
      for (std::int64_t k = 0; k < sub.count; ++k) {
        csv << seed << "," << k;
        for (int d = 0; d < dim; ++d)
          csv << "," << obs[static_cast<std::size_t>(k * dim + d)];
        csv << "\n";
      }
    }
    artifacts.push_back(writer.write_text(stem + ".csv", csv.str()));
    artifacts.push_back(writer.write_text(
        stem + ".json", dump_json(json{{"alpha", sub.alpha},
                                       {"count", sub.count},
                                       {"dim", dim},
                                       {"seeds", config.resolved.at("seeds")}})));
  } else if (name == "occupation_measure") {
    const double horizon = op.at("horizon").get<double>();
    const int bins = op.at("bins").get<int>();
    std::optional<lab::Binning> binning;
    if (const auto* ctmc = std::get_if<sim::FiniteCtmcSpec>(&need_process()))
      binning = lab::FiniteBinning{ctmc->rates.size()};
    std::ostringstream csv;
    csv.precision(17);
    csv << "seed,bin,weight\n";
    json summary = json::array();
    for (const auto seed : seeds) {
      const auto path = sim::simulate(need_process(), horizon, seed);
      if (!binning) binning = lab::GridBinning::fit_to_path(path, bins);
      const auto mu = lab::occupation_measure(path, *binning);
      for (Eigen::Index b = 0; b < mu.weights.size(); ++b) {
        if (mu.weights(b) > 0.0) csv << seed << "," << b << "," << mu.weights(b) << "\n";
      }
      json entry{{"seed", seed}, {"overflowMass", mu.overflow_mass()}};
      if (op.contains("tightnessRadii")) {
        const auto radii = op.at("tightnessRadii").get<std::vector<double>>();
        entry["tightnessRadii"] = radii;
        entry["massOutside"] = lab::tightness_profile(mu, radii);
      }
      summary.push_back(std::move(entry));
    }
    json meta{{"horizon", horizon}, {"runs", std::move(summary)}};
    if (const auto* grid = std::get_if<lab::GridBinning>(&*binning)) {
      meta["grid"] = json{{"lo", grid->lo}, {"hi", grid->hi}, {"binsPerAxis", grid->bins_per_axis}};
    } else {
      meta["finiteStates"] = std::get<lab::FiniteBinning>(*binning).n;
    }
    artifacts.push_back(writer.write_text(stem + ".csv", csv.str()));
    artifacts.push_back(writer.write_text(stem + ".json", dump_json(meta)));
  } else if (name == "drift_check") {
    const auto& spec = need_process();
    lab::SampleBox box{op.at("boxLo").get<std::vector<double>>(),
                       op.at("boxHi").get<std::vector<double>>()};
    lab::DriftCheckOptions options;
    options.compact_radius = op.at("compactRadius").get<double>();
    options.outlier_budget = op.at("outlierBudget").get<double>();
    options.samples_per_axis = op.at("samplesPerAxis").get<int>();
    options.fd_horizon = op.at("fdHorizon").get<double>();
    options.fd_replicas = op.at("fdReplicas").get<int>();
    options.seed = seeds.front();

    const std::string fn = op.at("testFunction").get<std::string>();
    std::function<double(std::span<const double>)> v;
    if (fn == "quadratic") {
      v = [](std::span<const double> x) {
        double s = 1.0;
        for (double xi : x) s += xi * xi;
        return s;
      };
    } else {  // "energy": 1 + U(x) + |v|^2/2 for the kinetic pair
      const auto* lg = std::get_if<sim::LangevinSpec>(&spec);
      if (lg == nullptr) throw std::runtime_error("energy test function needs a langevin process");
      v = [pot = lg->potential, d = lg->dim](std::span<const double> xv) {
        double s = 1.0 + pot(xv.first(static_cast<std::size_t>(d)));
        for (int i = 0; i < d; ++i) {
          const double vi = xv[static_cast<std::size_t>(d + i)];
          s += 0.5 * vi * vi;
        }
        return s;
      };
    }
    if (op.at("analytic").get<bool>()) {
      // Closed-form generator action, available for the quadratic test
      // function on preset diffusions.
      const auto* el = std::get_if<sim::EllipticDiffusionSpec>(&spec);
      if (el == nullptr || fn != "quadratic")
        throw std::runtime_error(
            "analytic generator supported for quadratic test functions on diffusions");
      options.analytic_generator = [drift = el->drift, sigma = el->sigma,
                                    dim = el->dim](std::span<const double> x) {
        std::vector<double> b(static_cast<std::size_t>(dim), 0.0);
        drift(x, b);
        const double s = sigma(x);
        double g = 0.0;
        for (int i = 0; i < dim; ++i) g += 2.0 * x[static_cast<std::size_t>(i)] * b[static_cast<std::size_t>(i)];
        g += s * s * static_cast<double>(dim);
        return g;
      };
    }
    const auto report = lab::lyapunov_drift_check(spec, v, box, options);
    artifacts.push_back(writer.write_text(
        stem + ".json", dump_json(json{{"c", report.c},
                                       {"C", report.big_c},
                                       {"compactRadius", report.compact_radius},
                                       {"outlierBudget", report.outlier_budget},
                                       {"violations", report.violations},
                                       {"fitPoints", report.fit_points},
                                       {"totalPoints", report.total_points},
                                       {"passing", report.passing}})));
  } else if (name == "invisibility_diagnostic") {
    const auto* demo = std::get_if<sim::QuasiFellerDemoSpec>(&need_process());
    if (demo == nullptr) throw std::runtime_error("needs a quasi-feller-demo process");
    std::vector<double> points = op.contains("points")
                                     ? op.at("points").get<std::vector<double>>()
                                     : std::vector<double>{demo->discontinuity};
    const auto report = lab::invisibility_diagnostic(
        *demo, points, op.at("deltas").get<std::vector<double>>(),
        op.at("steps").get<std::int64_t>(), seeds.front());
    artifacts.push_back(writer.write_text(
        stem + ".json", dump_json(json{{"points", points},
                                       {"deltas", report.deltas},
                                       {"masses", report.masses},
                                       {"steps", report.steps}})));
  } else if (name == "coexistence_scan") {
    lab::CoexistenceScanOptions options;
    options.magnetization_bins = op.at("bins").get<int>();
    const auto reports = lab::coexistence_scan(
        op.at("side").get<int>(), op.at("betas").get<std::vector<double>>(),
        op.at("horizon").get<double>(), op.at("mStar").get<double>(), seeds, options);
    std::ostringstream csv;
    csv.precision(17);
    csv << "beta,seed,mPlus,mMinus,separated,tv\n";
    json arr = json::array();
    for (const auto& r : reports) {
      csv << r.beta << "," << r.seed << "," << r.m_plus << "," << r.m_minus << ","
          << (r.separated ? 1 : 0) << "," << r.tv << "\n";
      arr.push_back(json{{"beta", r.beta},
                         {"seed", r.seed},
                         {"mPlus", r.m_plus},
                         {"mMinus", r.m_minus},
                         {"separated", r.separated},
                         {"tv", r.tv}});
    }
    artifacts.push_back(writer.write_text(stem + ".csv", csv.str()));
    artifacts.push_back(writer.write_text(
        stem + ".json", dump_json(json{{"mStar", op.at("mStar")},
                                       {"horizon", op.at("horizon")},
                                       {"side", op.at("side")},
                                       {"reports", std::move(arr)}})));
  } else if (name == "absorbing_diagnostic") {
    const auto report = lab::absorbing_diagnostic(
        op.at("side").get<int>(), op.at("beta").get<double>(), op.at("alpha").get<double>(),
        op.at("mStar").get<double>(), op.at("observations").get<std::int64_t>(), seeds);
    json rows = json::array();
    for (const auto& row : report.rows) {
      rows.push_back(json{{"seed", row.seed},
                          {"escapeFromPlus", row.from_plus},
                          {"escapeFromMinus", row.from_minus}});
    }
    artifacts.push_back(writer.write_text(
        stem + ".json", dump_json(json{{"beta", report.beta},
                                       {"alpha", report.alpha},
                                       {"mStar", report.m_star},
                                       {"observations", report.observations},
                                       {"rows", std::move(rows)},
                                       {"meanEscapeFromPlus", report.mean_from_plus},
                                       {"meanEscapeFromMinus", report.mean_from_minus}})));
  } else {
    throw std::logic_error("unhandled operation: " + name);
  }
  return artifacts;
}

bool op_needs_process(const std::string& name) {
  return is_exact_op(name) || name == "simulate" || name == "exp_subsample" ||
         name == "occupation_measure" || name == "drift_check" ||
         name == "invisibility_diagnostic";
}

}  // namespace

bool RunManifest::all_ok() const {
  for (const auto& op : operations) {
    if (op.status != "ok") return false;
  }
  return true;
}

json RunManifest::to_json() const {
  json ops = json::array();
  for (const auto& op : operations) {
    json arts = json::array();
    for (const auto& a : op.artifacts) {
      arts.push_back(json{{"path", a.path}, {"sha256", a.sha256}, {"bytes", a.bytes}});
    }
    ops.push_back(json{{"op", op.op},
                       {"status", op.status},
                       {"message", op.message},
                       {"artifacts", std::move(arts)}});
  }
  return json{{"configName", config_name},
              {"configHash", config_hash},
              {"toolVersion", tool_version},
              {"startedAt", started_at},
              {"finishedAt", finished_at},
              {"operations", std::move(ops)}};
}

RunManifest RunManifest::from_json(const json& j) {
  RunManifest m;
  m.config_name = j.at("configName").get<std::string>();
  m.config_hash = j.at("configHash").get<std::string>();
  m.tool_version = j.at("toolVersion").get<std::string>();
  m.started_at = j.at("startedAt").get<std::string>();
  m.finished_at = j.at("finishedAt").get<std::string>();
  for (const auto& op : j.at("operations")) {
    OperationRecord rec;
    rec.op = op.at("op").get<std::string>();
    rec.status = op.at("status").get<std::string>();
    rec.message = op.value("message", "");
    for (const auto& a : op.at("artifacts")) {
      rec.artifacts.push_back(ArtifactRecord{a.at("path").get<std::string>(),
                                             a.at("sha256").get<std::string>(),
                                             a.at("bytes").get<std::uint64_t>()});
    }
    m.operations.push_back(std::move(rec));
  }
  return m;
}

RunManifest run_experiment(const ExperimentConfig& config) {
  RunManifest manifest;
  manifest.config_name = config.name();
  manifest.config_hash = config.hash();
  manifest.tool_version = kToolVersion;
  manifest.started_at = iso_utc_now();

  ArtifactWriter writer(config.output_dir());

  // The process spec is shared by every sampling/exact operation; if it
  // cannot be built, operations that depend on it are skipped rather than
  // failed one by one.
  std::optional<sim::ProcessSpec> process;
  std::string process_failure;
  if (config.has_process()) {
    try {
      process = sim::spec_from_json(config.process());
    } catch (const std::exception& e) {
      process_failure = e.what();
    }
  }

  int index = 0;
  for (const auto& op : config.operations()) {
    OperationRecord record;
    record.op = op.at("op").get<std::string>();
    if (!process && !process_failure.empty() && op_needs_process(record.op)) {
      record.status = "skipped";
      record.message = "process construction failed: " + process_failure;
    } else {
      try {
        record.artifacts = execute_operation(op, index, config, process, writer);
        record.status = "ok";
      } catch (const std::exception& e) {
        record.status = "error";
        record.message = e.what();
      }
    }
    manifest.operations.push_back(std::move(record));
    ++index;
  }

  manifest.finished_at = iso_utc_now();
  writer.write_text("manifest.json", dump_json(manifest.to_json()));
  return manifest;
}

ReportFormat parse_report_format(const std::string& name) {
  if (name == "text") return ReportFormat::text;
  if (name == "json") return ReportFormat::json;
  if (name == "csv") return ReportFormat::csv;
  throw std::domain_error("unknown report format: " + name);
}

std::string render_report(const std::filesystem::path& manifest_file, ReportFormat format) {
  std::ifstream in(manifest_file);
  if (!in) throw std::runtime_error("cannot open manifest: " + manifest_file.string());
  json mj;
  try {
    in >> mj;
  } catch (const std::exception& e) {
    throw integrity_error("manifest is not valid JSON: " + std::string(e.what()));
  }
  const RunManifest manifest = RunManifest::from_json(mj);
  const std::filesystem::path dir = manifest_file.parent_path();

  // Integrity gate: every recorded artifact must still match its digest.
  for (const auto& op : manifest.operations) {
    for (const auto& a : op.artifacts) {
      const auto p = dir / a.path;
      if (!std::filesystem::exists(p)) throw integrity_error("artifact missing: " + a.path);
      const std::string digest = sha256_file(p);
      if (digest != a.sha256)
        throw integrity_error("artifact digest mismatch: " + a.path + " (expected " + a.sha256 +
                              ", found " + digest + ")");
    }
  }

  if (format == ReportFormat::json) {
    json artifacts = json::object();
    for (const auto& op : manifest.operations) {
      for (const auto& a : op.artifacts) {
        std::ifstream f(dir / a.path, std::ios::binary);
        std::stringstream buf;
        buf << f.rdbuf();
        if (a.path.size() > 5 && a.path.substr(a.path.size() - 5) == ".json") {
          artifacts[a.path] = json::parse(buf.str());
        } else {
          artifacts[a.path] = json{{"raw", buf.str()}};
        }
      }
    }
    return dump_json(json{{"manifest", mj}, {"artifacts", std::move(artifacts)}});
  }

  if (format == ReportFormat::csv) {
    std::ostringstream out;
    bool any_csv = false;
    for (const auto& op : manifest.operations) {
      for (const auto& a : op.artifacts) {
        if (a.path.size() > 4 && a.path.substr(a.path.size() - 4) == ".csv") {
          std::ifstream f(dir / a.path, std::ios::binary);
          out << f.rdbuf();
          any_csv = true;
        }
      }
    }
    if (!any_csv) {
      out << "op,status,artifacts\n";
      for (const auto& op : manifest.operations)
        out << op.op << "," << op.status << "," << op.artifacts.size() << "\n";
    }
    return out.str();
  }

  // text
  std::ostringstream out;
  out << "run " << manifest.config_name << "  config " << manifest.config_hash.substr(0, 12)
      << "  tool " << manifest.tool_version << "\n";
  out << "started " << manifest.started_at << "  finished " << manifest.finished_at << "\n";
  int idx = 0;
  for (const auto& op : manifest.operations) {
    out << (op.status == "ok" ? "[ok]  " : op.status == "skipped" ? "[skip]" : "[err] ") << " "
        << artifact_stem(idx, op.op);
    if (op.status == "ok") {
      // Summaries for the report-like artifacts people scan for.
      for (const auto& a : op.artifacts) {
        if (a.path.size() > 5 && a.path.substr(a.path.size() - 5) == ".json") {
          std::ifstream f(dir / a.path);
          json aj;
          f >> aj;
          if (aj.contains("verdict")) {
            out << "  verdict=" << aj["verdict"].get<std::string>()
                << " invariantDim=" << aj["invariantDim"].get<int>()
                << " irreducible=" << (aj["irreducible"].get<bool>() ? "yes" : "no");
          } else if (aj.contains("reports")) {
            out << "  cells=" << aj["reports"].size();
          } else if (aj.contains("passing")) {
            out << "  c=" << aj["c"].get<double>() << " C=" << aj["C"].get<double>()
                << " passing=" << (aj["passing"].get<bool>() ? "yes" : "no");
          } else if (aj.contains("meanEscapeFromPlus")) {
            out << "  escape+=" << aj["meanEscapeFromPlus"].get<double>()
                << " escape-=" << aj["meanEscapeFromMinus"].get<double>();
          }
          break;
        }
      }
      out << "  (" << op.artifacts.size() << (op.artifacts.size() == 1 ? " artifact)" : " artifacts)");
    } else {
      out << "  " << op.message;
    }
    out << "\n";
    ++idx;
  }
  return out.str();
}

}  // namespace ergolab::cli
