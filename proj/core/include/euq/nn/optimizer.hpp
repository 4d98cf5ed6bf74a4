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

#ifndef EUQ_NN_OPTIMIZER_HPP_
#define EUQ_NN_OPTIMIZER_HPP_

#include <Eigen/Core>
#include <cstdint>
#include <string>

namespace euq::nn {

enum class OptimizerKind { kSgd, kRmsprop, kAdagrad, kAdam };

std::string to_string(OptimizerKind k);
OptimizerKind optimizer_from_string(const std::string& s);

// First/second-moment state; shapes depend on the kind.
struct OptimizerState {
  OptimizerKind kind = OptimizerKind::kSgd;
  Eigen::VectorXd m;   // adam first moment
  Eigen::VectorXd v;   // adam/rmsprop second moment, adagrad accumulator
  std::int64_t step = 0;

  static OptimizerState init(OptimizerKind kind, Eigen::Index n);
};

// Fixed update-rule constants: adam beta1=0.9, beta2=0.999, eps=1e-8;
// rmsprop rho=0.9, eps=1e-8; adagrad eps=1e-8.
void optimizer_step(Eigen::VectorXd& weights, const Eigen::VectorXd& gradient,
                    double lr, OptimizerState& state);

}  // namespace euq::nn

#endif  // EUQ_NN_OPTIMIZER_HPP_
