#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <nlohmann/json.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "ergolab/cli/config.hpp"
#include "ergolab/cli/digest.hpp"
#include "ergolab/cli/runner.hpp"
#include "ergolab/common.hpp"

using namespace ergolab;
using namespace ergolab::cli;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

// Fresh directory per test case, removed again so reruns start clean.
struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() /
           ("ergolab-test-" + tag + "-" + std::to_string(static_cast<long>(::getpid())));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

json two_state_process() {
  return json{{"kind", "finite-ctmc"},
              {"rates", json::array({json::array({-1.0, 1.0}), json::array({2.0, -2.0})})},
              {"x0", 0}};
}

json exact_config(const fs::path& out_dir) {
  return json{{"name", "two-state"},
              {"engine", "exact"},
              {"process", two_state_process()},
              {"operations", json::array({json{{"op", "semigroup"}, {"t", 1.0}},
                                          json{{"op", "invariant_measures"}},
                                          json{{"op", "skeleton_cesaro"}, {"s", 0.5}, {"n", 100}}})},
              {"outputDir", out_dir.string()}};
}

json sampling_config(const fs::path& out_dir) {
  return json{{"name", "two-state-samples"},
              {"engine", "montecarlo"},
              {"process", two_state_process()},
              {"operations",
               json::array({json{{"op", "exp_subsample"}, {"alpha", 2.0}, {"count", 8}}})},
              {"seeds", json::array({1, 2})},
              {"outputDir", out_dir.string()}};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const fs::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary);
  out << content;
}

bool has_error_at(const ValidationOutcome& outcome, const std::string& path) {
  for (const auto& e : outcome.errors)
    if (e.path == path) return true;
  return false;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(ERGOLAB_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  REQUIRE(WIFEXITED(status));
  return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("sha256 digests") {
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");

  TempDir tmp("digest");
  spit(tmp.path / "abc.txt", "abc");
  CHECK(sha256_file(tmp.path / "abc.txt") == sha256_hex("abc"));

  std::string big(1 << 18, 'x');
  big[12345] = 'y';
  spit(tmp.path / "big.bin", big);
  CHECK(sha256_file(tmp.path / "big.bin") == sha256_hex(big));

  CHECK_THROWS_AS(sha256_file(tmp.path / "missing"), std::runtime_error);
}

TEST_CASE("config validation") {
  ::unsetenv("ERGOLAB_OUTPUT_DIR");
  TempDir tmp("config");

  SUBCASE("a minimal config resolves with defaults") {
    json raw{{"name", "demo"},
             {"engine", "exact"},
             {"process", two_state_process()},
             {"operations", json::array({json{{"op", "semigroup"}, {"t", 1.0}}})}};
    const auto outcome = validate_config_json(raw, tmp.path);
    REQUIRE(outcome.ok());
    CHECK(outcome.config->name() == "demo");
    CHECK(outcome.config->output_dir() == fs::path("out") / "demo");
    CHECK(outcome.config->seeds().empty());
    CHECK(outcome.config->hash().size() == 64);
  }
  SUBCASE("operation defaults are filled in") {
    json raw{{"name", "demo"},
             {"engine", "exact"},
             {"process", two_state_process()},
             {"operations", json::array({json{{"op", "check_invariance"}}})}};
    const auto outcome = validate_config_json(raw, tmp.path);
    REQUIRE(outcome.ok());
    const auto& op = outcome.config->operations()[0];
    CHECK(op.at("alpha").get<double>() == 1.0);
    CHECK(op.at("tolerance").get<double>() == 1e-8);
  }
  SUBCASE("every findable error is collected in one pass") {
    json raw{{"name", "bad/name"},
             {"engine", "turbo"},
             {"operations", json::array({json{{"op", "frobnicate"}},
                                         json{{"op", "resolvent"}}})},
             {"seeds", json{{"not", "an array"}}},
             {"bogus", 1}};
    const auto outcome = validate_config_json(raw, tmp.path);
    CHECK_FALSE(outcome.ok());
    CHECK_FALSE(outcome.config.has_value());
    CHECK(has_error_at(outcome, "/name"));
    CHECK(has_error_at(outcome, "/engine"));
    CHECK(has_error_at(outcome, "/operations/0/op"));
    CHECK(has_error_at(outcome, "/operations/1/alpha"));
    CHECK(has_error_at(outcome, "/operations/1"));  // resolvent needs a process
    CHECK(has_error_at(outcome, "/seeds"));
    CHECK(has_error_at(outcome, "/bogus"));
    CHECK(outcome.errors.size() >= 7);
  }
  SUBCASE("unknown operation fields are flagged") {
    json raw{{"name", "demo"},
             {"engine", "exact"},
             {"process", two_state_process()},
             {"operations", json::array({json{{"op", "semigroup"}, {"t", 1.0}, {"tt", 2.0}}})}};
    const auto outcome = validate_config_json(raw, tmp.path);
    CHECK(has_error_at(outcome, "/operations/0/tt"));
  }
  SUBCASE("out-of-range numbers carry their bounds") {
    json raw{{"name", "demo"},
             {"engine", "exact"},
             {"process", two_state_process()},
             {"operations", json::array({json{{"op", "resolvent"}, {"alpha", 0.0}}})}};
    const auto outcome = validate_config_json(raw, tmp.path);
    REQUIRE(has_error_at(outcome, "/operations/0/alpha"));
    for (const auto& e : outcome.errors)
      if (e.path == "/operations/0/alpha") CHECK(e.message.find("outside") != std::string::npos);
  }
  SUBCASE("sampling operations need seeds") {
    json raw{{"name", "demo"},
             {"engine", "montecarlo"},
             {"process", two_state_process()},
             {"operations", json::array({json{{"op", "simulate"}, {"horizon", 1.0}}})}};
    const auto outcome = validate_config_json(raw, tmp.path);
    CHECK(has_error_at(outcome, "/seeds"));
  }
  SUBCASE("engine and operation class must agree") {
    json raw{{"name", "demo"},
             {"engine", "exact"},
             {"process", two_state_process()},
             {"operations", json::array({json{{"op", "simulate"}, {"horizon", 1.0}}})}};
    CHECK(has_error_at(validate_config_json(raw, tmp.path), "/operations/0"));

    raw["engine"] = "montecarlo";
    raw["operations"] = json::array({json{{"op", "semigroup"}, {"t", 1.0}}});
    raw["seeds"] = json::array({1});
    CHECK(has_error_at(validate_config_json(raw, tmp.path), "/operations/0"));
  }
  SUBCASE("process kind must match the operation") {
    json raw{{"name", "demo"},
             {"engine", "montecarlo"},
             {"process", two_state_process()},
             {"operations",
              json::array({json{{"op", "drift_check"}, {"boxLo", json::array({-1.0})},
                                {"boxHi", json::array({1.0})}}})},
             {"seeds", json::array({1})}};
    CHECK(has_error_at(validate_config_json(raw, tmp.path), "/operations/0"));
  }
  SUBCASE("rates can be loaded from a text file") {
    spit(tmp.path / "ring.rates", "2\n-1 1\n2 -2\n");
    json raw{{"name", "demo"},
             {"engine", "exact"},
             {"process", json{{"kind", "finite-ctmc"}, {"ratesFile", "ring.rates"}}},
             {"operations", json::array({json{{"op", "semigroup"}, {"t", 1.0}}})}};
    const auto outcome = validate_config_json(raw, tmp.path);
    REQUIRE(outcome.ok());
    const auto& proc = outcome.config->process();
    CHECK_FALSE(proc.contains("ratesFile"));
    CHECK(proc.at("rates")[1][0].get<double>() == 2.0);
  }
  SUBCASE("a missing rates file is reported at its path") {
    json raw{{"name", "demo"},
             {"engine", "exact"},
             {"process", json{{"kind", "finite-ctmc"}, {"ratesFile", "nope.rates"}}},
             {"operations", json::array({json{{"op", "semigroup"}, {"t", 1.0}}})}};
    const auto outcome = validate_config_json(raw, tmp.path);
    REQUIRE(has_error_at(outcome, "/process/ratesFile"));
    for (const auto& e : outcome.errors)
      if (e.path == "/process/ratesFile")
        CHECK(e.message.find("file not found") != std::string::npos);
  }
  SUBCASE("a bad process spec is one error, not a crash") {
    json raw{{"name", "demo"},
             {"engine", "montecarlo"},
             {"process", json{{"kind", "glauber-ising"}, {"side", 0}}},
             {"operations", json::array({json{{"op", "simulate"}, {"horizon", 1.0}}})},
             {"seeds", json::array({1})}};
    const auto outcome = validate_config_json(raw, tmp.path);
    CHECK(has_error_at(outcome, "/process"));
  }
}

TEST_CASE("validating a resolved config is a fixed point") {
  ::unsetenv("ERGOLAB_OUTPUT_DIR");
  TempDir tmp("fixed-point");
  const auto first = validate_config_json(exact_config(tmp.path / "out"), tmp.path);
  REQUIRE(first.ok());
  const auto second = validate_config_json(first.config->resolved, tmp.path);
  REQUIRE(second.ok());
  CHECK(second.config->canonical() == first.config->canonical());
  CHECK(second.config->hash() == first.config->hash());
}

TEST_CASE("run writes artifacts and an accurate manifest") {
  ::unsetenv("ERGOLAB_OUTPUT_DIR");
  TempDir tmp("run");
  const auto outcome = validate_config_json(exact_config(tmp.path / "out"), tmp.path);
  REQUIRE(outcome.ok());
  const auto manifest = run_experiment(*outcome.config);

  CHECK(manifest.all_ok());
  CHECK(manifest.config_name == "two-state");
  CHECK(manifest.config_hash == outcome.config->hash());
  REQUIRE(manifest.operations.size() == 3);

  SUBCASE("recorded digests match the files on disk") {
    for (const auto& op : manifest.operations) {
      CHECK(op.status == "ok");
      REQUIRE(op.artifacts.size() == 1);
      const fs::path p = tmp.path / "out" / op.artifacts[0].path;
      REQUIRE(fs::exists(p));
      CHECK(sha256_file(p) == op.artifacts[0].sha256);
      CHECK(fs::file_size(p) == op.artifacts[0].bytes);
    }
  }
  SUBCASE("artifact names follow the index_op pattern") {
    CHECK(manifest.operations[0].artifacts[0].path == "00_semigroup.json");
    CHECK(manifest.operations[1].artifacts[0].path == "01_invariant_measures.json");
    CHECK(manifest.operations[2].artifacts[0].path == "02_skeleton_cesaro.json");
  }
  SUBCASE("nothing is written outside the output directory") {
    std::set<std::string> entries;
    for (const auto& e : fs::directory_iterator(tmp.path)) {
      entries.insert(e.path().filename().string());
    }
    CHECK(entries == std::set<std::string>{"out"});
    for (const auto& e : fs::directory_iterator(tmp.path / "out")) {
      const auto name = e.path().filename().string();
      CHECK(name.find(".tmp-") == std::string::npos);
    }
  }
  SUBCASE("the manifest round trips through json") {
    const auto parsed = RunManifest::from_json(json::parse(slurp(tmp.path / "out" / "manifest.json")));
    CHECK(parsed.to_json() == manifest.to_json());
  }
}

TEST_CASE("reruns produce byte-identical artifacts") {
  ::unsetenv("ERGOLAB_OUTPUT_DIR");
  TempDir tmp("rerun");

  SUBCASE("exact engine") {
    for (const char* sub : {"a", "b"}) {
      const auto outcome = validate_config_json(exact_config(tmp.path / sub), tmp.path);
      REQUIRE(outcome.ok());
      REQUIRE(run_experiment(*outcome.config).all_ok());
    }
    for (const char* name :
         {"00_semigroup.json", "01_invariant_measures.json", "02_skeleton_cesaro.json"}) {
      CHECK(slurp(tmp.path / "a" / name) == slurp(tmp.path / "b" / name));
    }
  }
  SUBCASE("sampling engine") {
    for (const char* sub : {"a", "b"}) {
      const auto outcome = validate_config_json(sampling_config(tmp.path / sub), tmp.path);
      REQUIRE(outcome.ok());
      REQUIRE(run_experiment(*outcome.config).all_ok());
    }
    CHECK(slurp(tmp.path / "a" / "00_exp_subsample.csv") ==
          slurp(tmp.path / "b" / "00_exp_subsample.csv"));
  }
}

TEST_CASE("a failing operation does not poison the rest of the run") {
  ::unsetenv("ERGOLAB_OUTPUT_DIR");
  TempDir tmp("isolation");

  // Rates this stiff exceed the uniformization term cap at t = 1, so the
  // semigroup op fails while the others still run.
  json raw{{"name", "stiff"},
           {"engine", "exact"},
           {"process",
            json{{"kind", "finite-ctmc"},
                 {"rates", json::array({json::array({-1e8, 1e8}), json::array({1e8, -1e8})})}}},
           {"operations", json::array({json{{"op", "semigroup"}, {"t", 1.0}},
                                       json{{"op", "invariant_measures"}},
                                       json{{"op", "absorbing_decomposition"}}})},
           {"outputDir", (tmp.path / "out").string()}};
  const auto outcome = validate_config_json(raw, tmp.path);
  REQUIRE(outcome.ok());
  const auto manifest = run_experiment(*outcome.config);

  CHECK_FALSE(manifest.all_ok());
  REQUIRE(manifest.operations.size() == 3);
  CHECK(manifest.operations[0].status == "error");
  CHECK_FALSE(manifest.operations[0].message.empty());
  CHECK(manifest.operations[0].artifacts.empty());
  CHECK(manifest.operations[1].status == "ok");
  CHECK(manifest.operations[2].status == "error");  // irreducible: only one invariant measure
  CHECK(manifest.operations[2].message.find("two invariant measures") != std::string::npos);
  CHECK(fs::exists(tmp.path / "out" / "01_invariant_measures.json"));
  CHECK(fs::exists(tmp.path / "out" / "manifest.json"));
}

TEST_CASE("report rendering") {
  ::unsetenv("ERGOLAB_OUTPUT_DIR");
  TempDir tmp("report");
  const auto outcome = validate_config_json(exact_config(tmp.path / "out"), tmp.path);
  REQUIRE(outcome.ok());
  REQUIRE(run_experiment(*outcome.config).all_ok());
  const fs::path manifest_file = tmp.path / "out" / "manifest.json";

  SUBCASE("text summarizes one line per operation") {
    const auto text = render_report(manifest_file, ReportFormat::text);
    CHECK(text.find("run two-state") != std::string::npos);
    CHECK(text.find("[ok]   00_semigroup") != std::string::npos);
    CHECK(text.find("[ok]   02_skeleton_cesaro") != std::string::npos);
  }
  SUBCASE("json embeds every artifact losslessly") {
    const auto j = json::parse(render_report(manifest_file, ReportFormat::json));
    CHECK(j.at("manifest").at("configName") == "two-state");
    const auto& artifacts = j.at("artifacts");
    REQUIRE(artifacts.contains("00_semigroup.json"));
    CHECK(artifacts.at("00_semigroup.json") ==
          json::parse(slurp(tmp.path / "out" / "00_semigroup.json")));
  }
  SUBCASE("csv falls back to an operation table when no csv artifacts exist") {
    const auto csv = render_report(manifest_file, ReportFormat::csv);
    CHECK(csv.rfind("op,status,artifacts\n", 0) == 0);
    CHECK(csv.find("semigroup,ok,1") != std::string::npos);
  }
  SUBCASE("csv concatenates tabular artifacts when present") {
    TempDir tmp2("report-csv");
    const auto mc = validate_config_json(sampling_config(tmp2.path / "out"), tmp2.path);
    REQUIRE(mc.ok());
    REQUIRE(run_experiment(*mc.config).all_ok());
    const auto csv = render_report(tmp2.path / "out" / "manifest.json", ReportFormat::csv);
    CHECK(csv.rfind("seed,k,x0\n", 0) == 0);
  }
  SUBCASE("a tampered artifact fails the integrity gate by name") {
    spit(tmp.path / "out" / "00_semigroup.json",
         slurp(tmp.path / "out" / "00_semigroup.json") + " ");
    CHECK_THROWS_WITH_AS(render_report(manifest_file, ReportFormat::text),
                         doctest::Contains("00_semigroup.json"), integrity_error);
  }
  SUBCASE("a deleted artifact fails the integrity gate") {
    fs::remove(tmp.path / "out" / "01_invariant_measures.json");
    CHECK_THROWS_WITH_AS(render_report(manifest_file, ReportFormat::text),
                         doctest::Contains("artifact missing"), integrity_error);
  }
  SUBCASE("format and manifest errors") {
    CHECK_THROWS_AS(parse_report_format("yaml"), std::domain_error);
    CHECK_THROWS_AS(render_report(tmp.path / "nope.json", ReportFormat::text),
                    std::runtime_error);
    spit(tmp.path / "garbage.json", "{not json");
    CHECK_THROWS_AS(render_report(tmp.path / "garbage.json", ReportFormat::text),
                    integrity_error);
  }
}

TEST_CASE("output directory override") {
  TempDir tmp("override");
  ::setenv("ERGOLAB_OUTPUT_DIR", (tmp.path / "forced").string().c_str(), 1);
  const auto forced = validate_config_json(exact_config(tmp.path / "ignored"), tmp.path);
  ::unsetenv("ERGOLAB_OUTPUT_DIR");
  REQUIRE(forced.ok());
  CHECK(forced.config->output_dir() == tmp.path / "forced");

  const auto plain = validate_config_json(exact_config(tmp.path / "ignored"), tmp.path);
  REQUIRE(plain.ok());
  CHECK(plain.config->output_dir() == tmp.path / "ignored");
}

TEST_CASE("command line round trip") {
  ::unsetenv("ERGOLAB_OUTPUT_DIR");
  TempDir tmp("cli");
  const fs::path cfg = tmp.path / "config.json";
  spit(cfg, exact_config(tmp.path / "out").dump(2));

  SUBCASE("validate") {
    CHECK(run_cli("validate " + cfg.string() + " -q") == 0);
    spit(tmp.path / "broken.json", "{oops");
    CHECK(run_cli("validate " + (tmp.path / "broken.json").string()) == 1);
    CHECK(run_cli("validate " + (tmp.path / "missing.json").string()) == 1);
  }
  SUBCASE("run then report") {
    REQUIRE(run_cli("run " + cfg.string()) == 0);
    const fs::path manifest = tmp.path / "out" / "manifest.json";
    REQUIRE(fs::exists(manifest));
    CHECK(run_cli("report " + manifest.string()) == 0);
    CHECK(run_cli("report " + manifest.string() + " --format=json") == 0);
    CHECK(run_cli("report " + manifest.string() + " --format=csv") == 0);
    CHECK(run_cli("report " + manifest.string() + " --format=yaml") == 1);
    CHECK(run_cli("report " + (tmp.path / "missing.json").string()) == 2);
  }
  SUBCASE("run reports partial failure in its exit code") {
    json raw = exact_config(tmp.path / "out2");
    raw["name"] = "stiff";
    raw["process"]["rates"] =
        json::array({json::array({-1e8, 1e8}), json::array({1e8, -1e8})});
    raw["operations"] = json::array({json{{"op", "semigroup"}, {"t", 1.0}},
                                     json{{"op", "invariant_measures"}}});
    spit(tmp.path / "stiff.json", raw.dump(2));
    CHECK(run_cli("run " + (tmp.path / "stiff.json").string()) == 2);
  }
  SUBCASE("bad invocations exit nonzero") {
    CHECK(run_cli("") != 0);
    CHECK(run_cli("frobnicate") != 0);
    CHECK(run_cli("--version") == 0);
  }
}
