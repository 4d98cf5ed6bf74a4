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

#include "euq/hpo/space.hpp"

#include <algorithm>
#include <cmath>

#include "euq/errors.hpp"

namespace euq::hpo {

void validate(const HyperSpace& space) {
  if (!(space.lr_min > 0.0) || !(space.lr_max > space.lr_min)) {
    throw ValidationError("learning-rate range is empty or non-positive");
  }
  if (space.batch_min < 1 || space.batch_max < space.batch_min) {
    throw ValidationError("batch-size range is empty");
  }
  if (space.optimizers.empty()) throw ValidationError("optimizer list is empty");
}

void validate(const HyperSpace& space, const HyperConfig& cfg) {
  validate(space);
  if (cfg.learning_rate < space.lr_min || cfg.learning_rate > space.lr_max) {
    throw ValidationError("learning rate out of range");
  }
  if (cfg.batch_size < space.batch_min || cfg.batch_size > space.batch_max) {
    throw ValidationError("batch size out of range");
  }
  if (std::find(space.optimizers.begin(), space.optimizers.end(), cfg.optimizer) ==
      space.optimizers.end()) {
    throw ValidationError("optimizer not in space");
  }
}

Eigen::VectorXd encode(const HyperSpace& space, const HyperConfig& cfg) {
  validate(space, cfg);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(space.encoded_dim());
  x(0) = std::log(cfg.learning_rate / space.lr_min) / std::log(space.lr_max / space.lr_min);
  x(1) = space.batch_max == space.batch_min
             ? 0.0
             : std::log(static_cast<double>(cfg.batch_size) / space.batch_min) /
                   std::log(static_cast<double>(space.batch_max) / space.batch_min);
  for (std::size_t i = 0; i < space.optimizers.size(); ++i) {
    if (space.optimizers[i] == cfg.optimizer) x(2 + static_cast<Eigen::Index>(i)) = 1.0;
  }
  return x;
}

HyperConfig decode(const HyperSpace& space, const Eigen::VectorXd& x) {
  validate(space);
  if (x.size() != space.encoded_dim()) throw ValidationError("encoded vector has wrong dimension");
  HyperConfig cfg;
  cfg.learning_rate = space.lr_min * std::pow(space.lr_max / space.lr_min, x(0));
  const double b = space.batch_min *
                   std::pow(static_cast<double>(space.batch_max) / space.batch_min, x(1));
  cfg.batch_size = std::clamp(static_cast<int>(std::lround(b)), space.batch_min, space.batch_max);
  Eigen::Index best = 0;
  x.tail(x.size() - 2).maxCoeff(&best);
  cfg.optimizer = space.optimizers[static_cast<std::size_t>(best)];
  return cfg;
}

HyperConfig random_sample(const HyperSpace& space, Rng& rng) {
  validate(space);
  HyperConfig cfg;
  cfg.learning_rate = space.lr_min * std::pow(space.lr_max / space.lr_min, rng.uniform01());
  const double b = space.batch_min *
                   std::pow(static_cast<double>(space.batch_max) / space.batch_min, rng.uniform01());
  cfg.batch_size = std::clamp(static_cast<int>(std::lround(b)), space.batch_min, space.batch_max);
  cfg.optimizer = space.optimizers[rng.below(space.optimizers.size())];
  return cfg;
}

}  // namespace euq::hpo
