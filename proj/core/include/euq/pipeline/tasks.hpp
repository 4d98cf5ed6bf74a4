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

#ifndef EUQ_PIPELINE_TASKS_HPP_
#define EUQ_PIPELINE_TASKS_HPP_

#include <memory>
#include <optional>

#include "euq/arch/space.hpp"
#include "euq/pipeline/config.hpp"
#include "euq/pod/pod.hpp"
#include "euq/search/types.hpp"
#include "euq/sst/scaling.hpp"
#include "euq/sst/sensors.hpp"
#include "euq/sst/synth.hpp"
#include "euq/sst/windows.hpp"

namespace euq::pipeline {

// Default chronological splits of the weekly series.
inline constexpr int kDefaultForecastTrain = 427;
inline constexpr int kDefaultReconstructTrain = 1040;

// Supervised data and side artifacts for one task, ready for the search.
struct TaskData {
  std::shared_ptr<const nn::Dataset> train;
  std::shared_ptr<const nn::Dataset> valid;
  int input_dim = 0;
  int output_dim = 0;
  arch::TaskKind arch_kind = arch::TaskKind::kDense;

  // Forecast artifacts.
  std::optional<pod::PodBasis> basis;
  std::optional<sst::CoeffScaler> scaler;
  // Reconstruction artifacts.
  std::optional<sst::SensorSet> sensors;
  // Data tasks: the land mask and the raw test fields (ocean-flattened).
  std::optional<sst::LandMask> mask;
  Eigen::MatrixXd test_ocean;
  // Forecast: standardized test coefficient series.
  Eigen::MatrixXd test_coeffs_std;
  // Synthetic: the generator parameters for oracle comparisons.
  std::optional<sst::Hetero1dData> synth;
};

// Loads data, fits POD / places sensors / generates the toy set, and builds
// the train/validation supervised splits (chronological 1 - valid_fraction /
// valid_fraction). Artifacts are persisted into the run directory when
// `persist_dir` is nonempty (pod.bin, scaler.csv, sensors.csv).
TaskData prepare_task(const RunConfig& cfg, const std::filesystem::path& persist_dir);

// Rebuilds TaskData for evaluation against an existing run directory,
// loading the persisted artifacts instead of refitting them.
TaskData reload_task(const RunConfig& cfg, const std::filesystem::path& run_dir);

// The architecture space matching the task's input/output contract.
arch::SearchSpace build_search_space(const RunConfig& cfg, const TaskData& data);

// Evaluator that decodes, builds, trains and checkpoints one network per
// request. Checkpoints land in run_dir/checkpoints/model_<id>.nnw.
search::Evaluator make_training_evaluator(const RunConfig& cfg,
                                          std::shared_ptr<const arch::SearchSpace> space,
                                          std::shared_ptr<const nn::Dataset> train,
                                          std::shared_ptr<const nn::Dataset> valid,
                                          const std::filesystem::path& run_dir);

// Decoded, checkpoint-loaded ensemble members for the given records.
std::vector<nn::Network> load_members(const arch::SearchSpace& space,
                                      const std::vector<search::CatalogRecord>& records,
                                      const std::filesystem::path& run_dir);

}  // namespace euq::pipeline

#endif  // EUQ_PIPELINE_TASKS_HPP_
