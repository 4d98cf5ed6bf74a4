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

#ifndef EUQ_SST_SCALING_HPP_
#define EUQ_SST_SCALING_HPP_

#include <Eigen/Core>
#include <filesystem>

namespace euq::sst {

// Per-coefficient standardization fitted on the training series: rows to zero
// mean and unit variance. Predicted means invert affinely, predicted
// variances scale by the squared deviation.
class CoeffScaler {
 public:
  CoeffScaler() = default;

  static CoeffScaler fit(const Eigen::MatrixXd& train_series /* M x T */);

  Eigen::MatrixXd transform(const Eigen::MatrixXd& series) const;
  Eigen::MatrixXd inverse_mean(const Eigen::MatrixXd& standardized) const;
  Eigen::MatrixXd inverse_variance(const Eigen::MatrixXd& standardized_var) const;

  const Eigen::VectorXd& mean() const { return mean_; }
  const Eigen::VectorXd& deviation() const { return deviation_; }
  Eigen::Index dim() const { return mean_.size(); }

  void save(const std::filesystem::path& path) const;
  static CoeffScaler load(const std::filesystem::path& path);

 private:
  Eigen::VectorXd mean_;
  Eigen::VectorXd deviation_;  // floored at 1e-12
};

}  // namespace euq::sst

#endif  // EUQ_SST_SCALING_HPP_
