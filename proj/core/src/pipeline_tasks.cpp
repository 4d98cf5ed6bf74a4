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

#include "euq/pipeline/tasks.hpp"

#include <chrono>
#include <cinttypes>
#include <cstdio>

#include "euq/errors.hpp"
#include "euq/nn/train.hpp"

namespace euq::pipeline {

namespace {

// Shared data-task plumbing: split the series, flatten to the ocean vector.
struct OceanSplit {
  sst::LandMask mask;
  Eigen::MatrixXd train;  // N x T_train
  Eigen::MatrixXd test;   // N x T_test
};

OceanSplit load_and_split(const RunConfig& cfg) {
  OceanSplit out;
  out.mask = sst::load_mask(cfg.mask_path);
  const Eigen::MatrixXd all = sst::load_ocean_matrix(cfg.snapshots_path, out.mask);
  int n_train = cfg.train_snapshots;
  if (n_train == 0) {
    n_train = cfg.task == Task::kForecast ? kDefaultForecastTrain : kDefaultReconstructTrain;
  }
  if (all.cols() <= n_train) {
    throw DataError("dataset holds " + std::to_string(all.cols()) +
                    " snapshots, need more than " + std::to_string(n_train));
  }
  out.train = all.leftCols(n_train);
  out.test = all.rightCols(all.cols() - n_train);
  return out;
}

TaskData prepare_forecast(const RunConfig& cfg, const std::filesystem::path& persist_dir,
                          const std::filesystem::path& reload_dir) {
  TaskData data;
  data.arch_kind = arch::TaskKind::kRecurrent;
  OceanSplit split = load_and_split(cfg);
  data.mask = split.mask;
  data.test_ocean = std::move(split.test);

  if (!reload_dir.empty()) {
    data.basis = pod::load_basis(reload_dir / "pod.bin");
    data.scaler = sst::CoeffScaler::load(reload_dir / "scaler.csv");
  } else {
    data.basis = cfg.pod_modes > 0
                     ? pod::fit_pod(split.train, cfg.pod_modes)
                     : pod::fit_pod_energy(split.train, cfg.pod_energy, cfg.pod_max_modes);
    const Eigen::MatrixXd train_coeffs = pod::project_all(*data.basis, split.train);
    data.scaler = sst::CoeffScaler::fit(train_coeffs);
  }

  const Eigen::MatrixXd train_std =
      data.scaler->transform(pod::project_all(*data.basis, split.train));
  data.test_coeffs_std = data.scaler->transform(pod::project_all(*data.basis, data.test_ocean));

  const sst::WindowedDataset windows = sst::build_forecast_windows(train_std, cfg.tau);
  auto [train_set, valid_set] = sst::chronological_split(windows.data, cfg.valid_fraction);
  data.train = std::make_shared<const nn::Dataset>(std::move(train_set));
  data.valid = std::make_shared<const nn::Dataset>(std::move(valid_set));
  data.input_dim = data.basis->n_modes();
  data.output_dim = cfg.tau * data.basis->n_modes();

  if (!persist_dir.empty()) {
    pod::save_basis(persist_dir / "pod.bin", *data.basis);
    data.scaler->save(persist_dir / "scaler.csv");
  }
  return data;
}

TaskData prepare_reconstruct(const RunConfig& cfg, const std::filesystem::path& persist_dir,
                             const std::filesystem::path& reload_dir) {
  TaskData data;
  data.arch_kind = arch::TaskKind::kDense;
  OceanSplit split = load_and_split(cfg);
  data.mask = split.mask;
  data.test_ocean = std::move(split.test);

  if (!reload_dir.empty()) {
    data.sensors = sst::load_sensors(reload_dir / "sensors.csv");
  } else {
    data.sensors = sst::sample_sensors(*data.mask, cfg.sensor_count, cfg.sensor_lat_min,
                                       cfg.sensor_lat_max, derive_seed(cfg.search.seed, 100));
  }

  // Sensor readings in, full ocean field out; fields stay in raw units.
  nn::Dataset all;
  const Eigen::Index t_train = split.train.cols();
  all.inputs.reserve(static_cast<std::size_t>(t_train));
  all.targets = split.train;
  for (Eigen::Index t = 0; t < t_train; ++t) {
    nn::Sequence s(data.sensors->count(), 1);
    s.col(0) = sst::observe_flat(*data.sensors, split.train.col(t));
    all.inputs.push_back(std::move(s));
  }
  auto [train_set, valid_set] = sst::chronological_split(all, cfg.valid_fraction);
  data.train = std::make_shared<const nn::Dataset>(std::move(train_set));
  data.valid = std::make_shared<const nn::Dataset>(std::move(valid_set));
  data.input_dim = data.sensors->count();
  data.output_dim = static_cast<int>(split.train.rows());

  if (!persist_dir.empty()) {
    sst::save_sensors(persist_dir / "sensors.csv", *data.sensors, *data.mask);
  }
  return data;
}

TaskData prepare_synthetic(const RunConfig& cfg) {
  TaskData data;
  data.arch_kind = arch::TaskKind::kDense;
  data.synth = sst::synth_hetero1d(cfg.synth_train, cfg.synth_seed, cfg.synth_noise,
                                   cfg.synth_x_min, cfg.synth_x_max);
  const nn::Dataset all = data.synth->to_dataset();
  auto [train_set, valid_set] = sst::chronological_split(all, cfg.valid_fraction);
  data.train = std::make_shared<const nn::Dataset>(std::move(train_set));
  data.valid = std::make_shared<const nn::Dataset>(std::move(valid_set));
  data.input_dim = 1;
  data.output_dim = 1;
  return data;
}

TaskData prepare_or_reload(const RunConfig& cfg, const std::filesystem::path& persist_dir,
                           const std::filesystem::path& reload_dir) {
  switch (cfg.task) {
    case Task::kForecast: return prepare_forecast(cfg, persist_dir, reload_dir);
    case Task::kReconstruct: return prepare_reconstruct(cfg, persist_dir, reload_dir);
    case Task::kSynthetic: return prepare_synthetic(cfg);
  }
  throw ConfigError("unreachable task kind");
}

}  // namespace

TaskData prepare_task(const RunConfig& cfg, const std::filesystem::path& persist_dir) {
  return prepare_or_reload(cfg, persist_dir, {});
}

TaskData reload_task(const RunConfig& cfg, const std::filesystem::path& run_dir) {
  return prepare_or_reload(cfg, {}, run_dir);
}

arch::SearchSpace build_search_space(const RunConfig& cfg, const TaskData& data) {
  return arch::SearchSpace::with_widths(data.arch_kind, cfg.arch_nodes, cfg.arch_widths,
                                        cfg.arch_activations, data.input_dim, data.output_dim);
}

search::Evaluator make_training_evaluator(const RunConfig& cfg,
                                          std::shared_ptr<const arch::SearchSpace> space,
                                          std::shared_ptr<const nn::Dataset> train,
                                          std::shared_ptr<const nn::Dataset> valid,
                                          const std::filesystem::path& run_dir) {
  const int max_epochs = cfg.max_epochs;
  const int plateau = cfg.plateau_patience;
  const double lr_factor = cfg.lr_factor;
  const int early_stop = cfg.early_stop_patience;
  return [=](const search::EvalRequest& request) -> search::EvalResult {
    const auto t0 = std::chrono::steady_clock::now();
    const nn::NetworkSpec spec = arch::decode(*space, request.arch);
    const nn::Network net = nn::build_network(spec, request.train_seed);

    nn::TrainingConfig tc;
    tc.learning_rate = request.hyper.learning_rate;
    tc.batch_size = request.hyper.batch_size;
    tc.optimizer = request.hyper.optimizer;
    tc.max_epochs = max_epochs;
    tc.plateau_patience = plateau;
    tc.lr_factor = lr_factor;
    tc.early_stop_patience = early_stop;
    tc.seed = derive_seed(request.train_seed, 1);

    const nn::TrainResult tr = nn::train(net, *train, *valid, tc);

    char name[48];
    std::snprintf(name, sizeof name, "checkpoints/model_%06" PRIu64 ".nnw",
                  static_cast<std::uint64_t>(request.id));
    nn::save_checkpoint(run_dir / name, tr.network);

    search::EvalResult result;
    result.id = request.id;
    result.valid_nll = tr.best_valid_nll;
    result.checkpoint = name;
    result.diverged = tr.diverged;
    result.train_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return result;
  };
}

std::vector<nn::Network> load_members(const arch::SearchSpace& space,
                                      const std::vector<search::CatalogRecord>& records,
                                      const std::filesystem::path& run_dir) {
  std::vector<nn::Network> members;
  members.reserve(records.size());
  for (const auto& r : records) {
    if (r.checkpoint.empty()) throw DataError("catalog record has no checkpoint");
    const nn::NetworkSpec spec = arch::decode(space, r.arch);
    members.push_back(nn::load_checkpoint(run_dir / r.checkpoint, spec));
  }
  return members;
}

}  // namespace euq::pipeline
