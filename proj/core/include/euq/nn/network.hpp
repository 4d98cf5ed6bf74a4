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

#ifndef EUQ_NN_NETWORK_HPP_
#define EUQ_NN_NETWORK_HPP_

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "euq/nn/spec.hpp"

namespace euq::nn {

// One input sample: rows = feature dimension, cols = time steps. Plain
// vector inputs are sequences of length one.
using Sequence = Eigen::MatrixXd;

// Per-output Gaussian prediction for a single sample.
struct GaussianPrediction {
  Eigen::VectorXd mean;
  Eigen::VectorXd variance;  // strictly positive
};

// Column i holds the prediction for sample i of a batch.
struct GaussianBatch {
  Eigen::MatrixXd mean;
  Eigen::MatrixXd variance;

  Eigen::Index batch_size() const { return mean.cols(); }
  GaussianPrediction sample(Eigen::Index i) const { return {mean.col(i), variance.col(i)}; }
};

// A spec plus its flat 64-bit weight vector. Weights are addressed through
// the spec's ParamLayout; the vector length always equals the layout total.
class Network {
 public:
  Network() = default;
  Network(NetworkSpec spec, Eigen::VectorXd weights);

  const NetworkSpec& spec() const { return spec_; }
  const ParamLayout& layout() const { return layout_; }
  const Eigen::VectorXd& weights() const { return weights_; }

  // Replacement must keep the layout length; values must be finite.
  void set_weights(Eigen::VectorXd weights);

  std::size_t parameter_count() const { return layout_.total; }

 private:
  NetworkSpec spec_;
  ParamLayout layout_;
  Eigen::VectorXd weights_;
};

// Deterministic scaled-uniform initialization (limit sqrt(6/(fan_in+fan_out))
// per matrix, zero biases except the LSTM forget gate at one).
Network build_network(const NetworkSpec& spec, std::uint64_t seed);

// Forward pass for one sample. Variance head is softplus(raw) + 1e-6.
GaussianPrediction forward_gaussian(const Network& net, const Sequence& x);

// Batched forward; all samples must share the feature dimension (sequence
// lengths may differ).
GaussianBatch forward_gaussian(const Network& net, const std::vector<Sequence>& batch);

// Mean Gaussian negative log-likelihood over every (sample, output) pair:
// log(var)/2 + (y-mean)^2/(2 var) + log(2 pi)/2.
double nll_loss(const GaussianPrediction& pred, const Eigen::VectorXd& target);
double nll_loss(const GaussianBatch& pred, const Eigen::MatrixXd& targets);

struct LossGrad {
  double loss = 0.0;
  Eigen::VectorXd grad;  // same layout as Network weights
};

// Reverse-mode gradient of the mean batch NLL with respect to every weight.
// Throws NumericError (with the offending layer index) on non-finite results.
LossGrad grad(const Network& net, const std::vector<Sequence>& batch,
              const Eigen::MatrixXd& targets);

// Variance floor added after softplus in the head.
inline constexpr double kVarianceFloor = 1e-6;

// 0.5 * log(2 pi); the constant term of the Gaussian NLL.
inline constexpr double kNllConstant = 0.91893853320467274178;

}  // namespace euq::nn

#endif  // EUQ_NN_NETWORK_HPP_
