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

#include "euq/nn/optimizer.hpp"

#include <cmath>

#include "euq/errors.hpp"

namespace euq::nn {

namespace {
constexpr double kAdamBeta1 = 0.9;
constexpr double kAdamBeta2 = 0.999;
constexpr double kEps = 1e-8;
constexpr double kRmspropRho = 0.9;
}  // namespace

std::string to_string(OptimizerKind k) {
  switch (k) {
    case OptimizerKind::kSgd: return "sgd";
    case OptimizerKind::kRmsprop: return "rmsprop";
    case OptimizerKind::kAdagrad: return "adagrad";
    case OptimizerKind::kAdam: return "adam";
  }
  return "?";
}

OptimizerKind optimizer_from_string(const std::string& s) {
  if (s == "sgd") return OptimizerKind::kSgd;
  if (s == "rmsprop") return OptimizerKind::kRmsprop;
  if (s == "adagrad") return OptimizerKind::kAdagrad;
  if (s == "adam") return OptimizerKind::kAdam;
  throw ValidationError("unknown optimizer: " + s);
}

OptimizerState OptimizerState::init(OptimizerKind kind, Eigen::Index n) {
  OptimizerState s;
  s.kind = kind;
  if (kind == OptimizerKind::kAdam) s.m = Eigen::VectorXd::Zero(n);
  if (kind != OptimizerKind::kSgd) s.v = Eigen::VectorXd::Zero(n);
  return s;
}

void optimizer_step(Eigen::VectorXd& weights, const Eigen::VectorXd& gradient, double lr,
                    OptimizerState& state) {
  if (lr <= 0.0) throw ValidationError("learning rate must be positive");
  if (weights.size() != gradient.size()) throw ValidationError("weight/gradient size mismatch");
  state.step += 1;
  switch (state.kind) {
    case OptimizerKind::kSgd:
      weights -= lr * gradient;
      break;
    case OptimizerKind::kRmsprop:
      state.v = kRmspropRho * state.v.array() + (1.0 - kRmspropRho) * gradient.array().square();
      weights.array() -= lr * gradient.array() / (state.v.array().sqrt() + kEps);
      break;
    case OptimizerKind::kAdagrad:
      state.v.array() += gradient.array().square();
      weights.array() -= lr * gradient.array() / (state.v.array().sqrt() + kEps);
      break;
    case OptimizerKind::kAdam: {
      state.m = kAdamBeta1 * state.m.array() + (1.0 - kAdamBeta1) * gradient.array();
      state.v = kAdamBeta2 * state.v.array() + (1.0 - kAdamBeta2) * gradient.array().square();
      const double c1 = 1.0 - std::pow(kAdamBeta1, static_cast<double>(state.step));
      const double c2 = 1.0 - std::pow(kAdamBeta2, static_cast<double>(state.step));
      weights.array() -=
          lr * (state.m.array() / c1) / ((state.v.array() / c2).sqrt() + kEps);
      break;
    }
  }
}

}  // namespace euq::nn
