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

#ifndef EUQ_HPO_SPACE_HPP_
#define EUQ_HPO_SPACE_HPP_

#include <Eigen/Core>
#include <vector>

#include "euq/nn/optimizer.hpp"
#include "euq/rng.hpp"

namespace euq::hpo {

// Training-hyperparameter box: log-uniform learning rate, log-uniform integer
// batch size, categorical optimizer.
struct HyperSpace {
  double lr_min = 1e-4;
  double lr_max = 1e-1;
  int batch_min = 32;
  int batch_max = 256;
  std::vector<nn::OptimizerKind> optimizers = {
      nn::OptimizerKind::kSgd, nn::OptimizerKind::kRmsprop, nn::OptimizerKind::kAdagrad,
      nn::OptimizerKind::kAdam};

  // Encoded dimension: two scaled axes plus a one-hot block.
  int encoded_dim() const { return 2 + static_cast<int>(optimizers.size()); }
};

void validate(const HyperSpace& space);

struct HyperConfig {
  double learning_rate = 1e-3;
  int batch_size = 32;
  nn::OptimizerKind optimizer = nn::OptimizerKind::kAdam;

  bool operator==(const HyperConfig&) const = default;
};

void validate(const HyperSpace& space, const HyperConfig& cfg);

// Log-scale learning rate and batch size mapped to [0,1]; optimizer one-hot.
Eigen::VectorXd encode(const HyperSpace& space, const HyperConfig& cfg);

// Inverse of encode; batch sizes round to the nearest integer in range.
HyperConfig decode(const HyperSpace& space, const Eigen::VectorXd& x);

// Uniform draw respecting each prior (log-uniform ranges, uniform categorical).
HyperConfig random_sample(const HyperSpace& space, Rng& rng);

}  // namespace euq::hpo

#endif  // EUQ_HPO_SPACE_HPP_
