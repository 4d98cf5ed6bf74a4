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

#ifndef EUQ_PIPELINE_CONFIG_HPP_
#define EUQ_PIPELINE_CONFIG_HPP_

#include <filesystem>
#include <string>
#include <vector>

#include "euq/hpo/space.hpp"
#include "euq/nn/activation.hpp"
#include "euq/search/orchestrator.hpp"

namespace euq::pipeline {

enum class Task { kForecast, kReconstruct, kSynthetic };

std::string to_string(Task t);
Task task_from_string(const std::string& s);

// Everything a run needs, parsed from a JSON config file and persisted into
// the run directory as config.json. Relative run directories resolve against
// the EUQ_RUN_ROOT environment variable when set.
struct RunConfig {
  Task task = Task::kSynthetic;
  std::string run_dir;

  // Data files (forecast and reconstruction tasks).
  std::string snapshots_path;
  std::string mask_path;
  int train_snapshots = 0;  // 0 = task default (427 forecast, 1040 reconstruction)

  search::SearchConfig search;
  hpo::HyperSpace hyper;

  // Architecture space.
  int arch_nodes = 5;
  std::vector<int> arch_widths = {16, 32, 64, 128, 256};
  std::vector<nn::Activation> arch_activations = {nn::Activation::kRelu, nn::Activation::kTanh};

  // Training defaults shared by every evaluation (LR/batch/optimizer come
  // from the hyperparameter search).
  int max_epochs = 200;
  int plateau_patience = 15;
  double lr_factor = 0.5;
  int early_stop_patience = 20;
  double valid_fraction = 0.1;

  int ensemble_k = 10;

  // POD controls: modes = 0 selects the smallest count retaining
  // `pod_energy`, capped at pod_max_modes.
  int pod_modes = 0;
  double pod_energy = 0.9;
  int pod_max_modes = 50;
  int tau = 8;

  int sensor_count = 50;
  double sensor_lat_min = -50.0;
  double sensor_lat_max = 50.0;

  // Synthetic heteroscedastic task.
  int synth_train = 512;
  double synth_noise = 0.3;
  double synth_x_min = -2.0;
  double synth_x_max = 2.0;
  std::uint64_t synth_seed = 7;

  // Run directory after EUQ_RUN_ROOT resolution.
  std::filesystem::path resolved_run_dir() const;
};

void validate(const RunConfig& cfg);

RunConfig load_run_config(const std::filesystem::path& path);
RunConfig run_config_from_json_text(const std::string& text);
std::string to_json_text(const RunConfig& cfg);
void save_run_config(const std::filesystem::path& path, const RunConfig& cfg);

// Environment variable naming the root for relative run directories.
inline constexpr const char* kRunRootEnv = "EUQ_RUN_ROOT";

}  // namespace euq::pipeline

#endif  // EUQ_PIPELINE_CONFIG_HPP_
