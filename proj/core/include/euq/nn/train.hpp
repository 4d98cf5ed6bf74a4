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

#ifndef EUQ_NN_TRAIN_HPP_
#define EUQ_NN_TRAIN_HPP_

#include <Eigen/Core>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "euq/nn/network.hpp"
#include "euq/nn/optimizer.hpp"

namespace euq::nn {

// Supervised set: inputs[i] pairs with targets.col(i).
struct Dataset {
  std::vector<Sequence> inputs;
  Eigen::MatrixXd targets;

  Eigen::Index size() const { return targets.cols(); }
  bool empty() const { return size() == 0; }
};

struct TrainingConfig {
  double learning_rate = 1e-3;     // valid range [1e-4, 1e-1]
  int batch_size = 32;             // valid range [32, 256], clamped to the set size
  OptimizerKind optimizer = OptimizerKind::kAdam;
  int plateau_patience = 15;       // epochs without improvement before halving the LR
  double lr_factor = 0.5;
  int early_stop_patience = 20;    // epochs without improvement before stopping
  int max_epochs = 200;
  std::uint64_t seed = 0;          // drives the per-epoch shuffle
};

void validate(const TrainingConfig& cfg);

struct EpochStats {
  int epoch = 0;
  double train_nll = 0.0;
  double valid_nll = 0.0;
  double learning_rate = 0.0;
};

struct TrainResult {
  Network network;            // checkpoint with minimum validation NLL
  double best_valid_nll = 0.0;
  int best_epoch = 0;
  std::vector<EpochStats> history;
  bool diverged = false;      // training aborted on non-finite loss/gradient
};

// Minimizes the mean Gaussian NLL with mini-batch updates. The learning rate
// halves after `plateau_patience` epochs without validation improvement and
// training stops after `early_stop_patience` such epochs or at `max_epochs`.
// The returned network is the best-validation checkpoint, not the last epoch.
TrainResult train(const Network& net, const Dataset& train_set, const Dataset& valid_set,
                  const TrainingConfig& cfg);

// Weight checkpoint file: "NNW1" magic, spec hash and parameter count as
// little-endian u64, then parameters as little-endian f64 in layout order.
void save_checkpoint(const std::filesystem::path& path, const Network& net);

// Validates magic, hash and count against `spec` before loading weights.
Network load_checkpoint(const std::filesystem::path& path, const NetworkSpec& spec);

}  // namespace euq::nn

#endif  // EUQ_NN_TRAIN_HPP_
