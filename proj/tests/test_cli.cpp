#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "euq/pipeline/config.hpp"
#include "pipeline_fixtures.hpp"
#include "test_helpers.hpp"

namespace fs = std::filesystem;

namespace {

int run_cli(const std::string& args) {
  const std::string cmd = std::string(EUQ_CLI_BIN) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

fs::path write_config(const fs::path& dir, const euq::pipeline::RunConfig& cfg) {
  const fs::path path = dir / "config.json";
  std::ofstream os(path);
  os << euq::pipeline::to_json_text(cfg);
  return path;
}

}  // namespace

TEST_CASE("cli runs the synthetic pipeline end to end") {
  const auto root = euq_test::temp_dir("cli");
  euq::pipeline::RunConfig cfg = euq_test::toy_synthetic_config(root / "run");
  cfg.search.workers = 1;
  cfg.search.max_evaluations = 4;
  cfg.ensemble_k = 2;
  const fs::path config = write_config(root, cfg);

  CHECK(run_cli("search --config " + config.string()) == 0);
  CHECK(fs::exists(root / "run" / "catalog.jsonl"));
  const std::string catalog = slurp(root / "run" / "catalog.jsonl");

  // Idempotent rerun.
  CHECK(run_cli("search --config " + config.string()) == 0);
  CHECK(slurp(root / "run" / "catalog.jsonl") == catalog);

  CHECK(run_cli("ensemble --run " + (root / "run").string() + " --k 2") == 0);
  CHECK(run_cli("evaluate --run " + (root / "run").string()) == 0);
  CHECK(fs::exists(root / "run" / "reports" / "uq_summary.csv"));
  CHECK(run_cli("predict --run " + (root / "run").string()) == 0);
  CHECK(run_cli("report --run " + (root / "run").string()) == 0);
  CHECK(fs::exists(root / "run" / "reports" / "convergence.csv"));

  // A seeded rerun into a fresh directory reproduces the catalog bytes.
  euq::pipeline::RunConfig cfg2 = cfg;
  cfg2.run_dir = (root / "run2").string();
  fs::create_directories(root / "run2_cfg");
  const fs::path config2 = write_config(root / "run2_cfg", cfg2);
  CHECK(run_cli("search --config " + config2.string()) == 0);
  CHECK(slurp(root / "run2" / "catalog.jsonl") == catalog);
  fs::remove_all(root);
}

TEST_CASE("cli maps bad usage and missing files to exit code 2") {
  CHECK(run_cli("") == 2);
  CHECK(run_cli("search") == 2);                          // missing --config
  CHECK(run_cli("search --config /nonexistent.json") == 2);
  CHECK(run_cli("evaluate --run /nonexistent_run_dir") == 2);
  CHECK(run_cli("frobnicate") == 2);

  const auto root = euq_test::temp_dir("clibad");
  std::ofstream(root / "bad.json") << "{\"task\": \"forecast\", \"run_dir\": \"x\"}";
  CHECK(run_cli("search --config " + (root / "bad.json").string()) == 2);

  // Valid config shape, but the data files do not exist.
  std::ofstream(root / "missing_data.json")
      << "{\"task\": \"forecast\", \"run_dir\": \"" << (root / "run").string()
      << "\", \"data\": {\"snapshots\": \"/no/such.bin\", \"mask\": \"/no/mask.bin\"},"
      << " \"search\": {\"max_evals\": 2}}";
  CHECK(run_cli("search --config " + (root / "missing_data.json").string()) == 2);
  fs::remove_all(root);
}

TEST_CASE("relative run directories resolve against EUQ_RUN_ROOT") {
  const auto root = euq_test::temp_dir("clienv");
  euq::pipeline::RunConfig cfg = euq_test::toy_synthetic_config("rel_run");
  cfg.search.workers = 1;
  cfg.search.max_evaluations = 2;
  cfg.ensemble_k = 2;
  const fs::path config = write_config(root, cfg);

  setenv(euq::pipeline::kRunRootEnv, root.c_str(), 1);
  const int code = run_cli("search --config " + config.string());
  unsetenv(euq::pipeline::kRunRootEnv);
  CHECK(code == 0);
  CHECK(fs::exists(root / "rel_run" / "catalog.jsonl"));
  fs::remove_all(root);
}
