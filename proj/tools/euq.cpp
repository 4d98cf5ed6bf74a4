// Copyright 2026 The EUQ Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <CLI11.hpp>
#include <cstdio>
#include <iostream>

#include "euq/errors.hpp"
#include "euq/pipeline/run.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kInternalError = 1;
constexpr int kUsageError = 2;

int run_search(const std::string& config_path, int workers, long max_evals, long seed, int k,
               bool force) {
  euq::pipeline::RunConfig cfg = euq::pipeline::load_run_config(config_path);
  if (workers > 0) cfg.search.workers = workers;
  if (max_evals > 0) cfg.search.max_evaluations = static_cast<std::uint64_t>(max_evals);
  if (seed >= 0) cfg.search.seed = static_cast<std::uint64_t>(seed);
  if (k > 0) cfg.ensemble_k = k;
  const auto catalog = euq::pipeline::cmd_search(cfg, force);
  std::size_t usable = 0;
  for (const auto& r : catalog) usable += r.usable();
  std::cout << "search: " << catalog.size() << " evaluations (" << usable << " usable) in "
            << cfg.resolved_run_dir().string() << "\n";
  return kOk;
}

int run_ensemble(const std::string& run_dir, int k, bool force) {
  const euq::pipeline::RunConfig cfg = euq::pipeline::load_run_dir_config(run_dir);
  const int k_eff = k > 0 ? k : cfg.ensemble_k;
  const auto members = euq::pipeline::cmd_ensemble(run_dir, k_eff, force);
  std::cout << "ensemble: " << members.size() << " members\n";
  for (const auto& m : members) {
    std::cout << "  id " << m.id << "  valid_nll " << m.valid_nll << "\n";
  }
  return kOk;
}

int run_evaluate(const std::string& run_dir, bool force) {
  const auto out = euq::pipeline::cmd_evaluate(run_dir, force);
  using euq::pipeline::Task;
  switch (out.task) {
    case Task::kForecast:
      std::cout << "evaluate: forecast ensemble RMSE by week (degC, Eastern Pacific)\n";
      for (std::size_t w = 0; w < out.weekly_rmse_region.size(); ++w) {
        std::cout << "  week " << w + 1 << "  " << out.weekly_rmse_region[w] << "\n";
      }
      std::cout << "  mae/aleatoric correlation " << out.mae_aleatoric_correlation << "\n";
      break;
    case Task::kReconstruct:
      std::cout << "evaluate: reconstruction ensemble relative L2 " << out.ensemble_relative_l2
                << "\n  mae/aleatoric correlation " << out.mae_aleatoric_correlation << "\n";
      break;
    case Task::kSynthetic:
      std::cout << "evaluate: synthetic aleatoric profile r " << out.aleatoric_profile_correlation
                << "\n  epistemic inside " << out.epistemic_inside << " outside "
                << out.epistemic_outside << "\n";
      break;
  }
  if ((out.task == Task::kForecast || out.task == Task::kReconstruct) &&
      !out.ensemble_not_worse_than_worst_member) {
    std::cout << "  warning: ensemble scored worse than its worst member on this run\n";
  }
  return kOk;
}

int run_report(const std::string& run_dir, bool force, int window) {
  euq::pipeline::cmd_report(run_dir, force, window);
  std::cout << "report: wrote convergence.csv, spectrum.csv, search_summary.csv\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Evolutionary deep-ensemble uncertainty quantification"};
  app.require_subcommand(1);

  std::string config_path, run_dir;
  int workers = 0, k = 0, window = 25;
  long max_evals = 0, seed = -1;
  bool force = false;

  auto* search = app.add_subcommand("search", "Run the architecture/hyperparameter search");
  search->add_option("--config", config_path, "Run configuration JSON")->required();
  search->add_option("--workers", workers, "Override worker count");
  search->add_option("--max-evals", max_evals, "Override evaluation budget");
  search->add_option("--seed", seed, "Override master seed");
  search->add_option("--k", k, "Override ensemble size recorded in the config");
  search->add_flag("--force", force, "Redo the search even if a catalog exists");

  auto* ensemble = app.add_subcommand("ensemble", "Select the top-K models into a manifest");
  ensemble->add_option("--run", run_dir, "Run directory")->required();
  ensemble->add_option("--k", k, "Ensemble size (default: config)");
  ensemble->add_flag("--force", force, "Rebuild an existing manifest");

  auto* evaluate = app.add_subcommand("evaluate", "Predict on the test split and write metrics");
  evaluate->add_option("--run", run_dir, "Run directory")->required();
  evaluate->add_flag("--force", force, "Rewrite existing reports");
  auto* predict = app.add_subcommand("predict", "Alias of evaluate");
  predict->add_option("--run", run_dir, "Run directory")->required();
  predict->add_flag("--force", force, "Rewrite existing reports");

  auto* report = app.add_subcommand("report", "Write convergence and spectrum CSVs");
  report->add_option("--run", run_dir, "Run directory")->required();
  report->add_option("--window", window, "Moving-average window");
  report->add_flag("--force", force, "Rewrite existing reports");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsageError;
  }

  try {
    if (search->parsed()) return run_search(config_path, workers, max_evals, seed, k, force);
    if (ensemble->parsed()) return run_ensemble(run_dir, k, force);
    if (evaluate->parsed() || predict->parsed()) return run_evaluate(run_dir, force);
    if (report->parsed()) return run_report(run_dir, force, window);
  } catch (const euq::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const euq::DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const euq::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternalError;
  }
  return kUsageError;
}
