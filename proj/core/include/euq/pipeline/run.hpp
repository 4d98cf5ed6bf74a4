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

#ifndef EUQ_PIPELINE_RUN_HPP_
#define EUQ_PIPELINE_RUN_HPP_

#include "euq/pipeline/tasks.hpp"

namespace euq::pipeline {

// Run-directory layout.
inline constexpr const char* kConfigFile = "config.json";
inline constexpr const char* kCatalogFile = "catalog.jsonl";
inline constexpr const char* kManifestFile = "ensemble.json";
inline constexpr const char* kReportsDir = "reports";
inline constexpr const char* kCheckpointsDir = "checkpoints";

// Runs the full search into the run directory (config snapshot, artifacts,
// checkpoints, catalog). With an existing catalog the call is a no-op unless
// `force` is set.
search::Catalog cmd_search(const RunConfig& cfg, bool force = false);

// Top-K selection over the run's catalog, persisted as ensemble.json.
std::vector<search::CatalogRecord> cmd_ensemble(const std::filesystem::path& run_dir, int k,
                                                bool force = false);

// Task-specific evaluation summary; the full tables land under reports/.
struct EvaluateOutcome {
  Task task = Task::kSynthetic;
  // Forecast: pooled ensemble RMSE per lead week, full ocean and region.
  std::vector<double> weekly_rmse;
  std::vector<double> weekly_rmse_region;
  // Forecast and reconstruction: correlation of the MAE field with the
  // aleatoric sd field over ocean cells.
  double mae_aleatoric_correlation = 0.0;
  // Reconstruction: mean relative L2 of the ensemble and of each member, and
  // the net ensemble-minus-member histogram counts over the lowest quartile
  // of RMSE bins.
  double ensemble_relative_l2 = 0.0;
  std::vector<double> member_relative_l2;
  long histogram_diff_low_quartile = 0;
  // Synthetic: correlation of predicted aleatoric sd with the true noise
  // profile inside the training support, and mean epistemic variance inside
  // versus outside the support.
  double aleatoric_profile_correlation = 0.0;
  double epistemic_inside = 0.0;
  double epistemic_outside = 0.0;
  // Empirical sanity flag on data tasks: the ensemble never scored worse than
  // its worst member on the run's headline metric.
  bool ensemble_not_worse_than_worst_member = true;
};

EvaluateOutcome cmd_evaluate(const std::filesystem::path& run_dir, bool force = false);

// Convergence moving average, model spectrum, and run summary CSVs.
void cmd_report(const std::filesystem::path& run_dir, bool force = false,
                int moving_average_window = 25);

// Loads the run's config snapshot.
RunConfig load_run_dir_config(const std::filesystem::path& run_dir);

// Loads ensemble.json; empty when missing.
std::vector<search::CatalogRecord> load_manifest(const std::filesystem::path& run_dir);

}  // namespace euq::pipeline

#endif  // EUQ_PIPELINE_RUN_HPP_
