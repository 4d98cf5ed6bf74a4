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

#ifndef EUQ_HPO_GP_HPP_
#define EUQ_HPO_GP_HPP_

#include <Eigen/Core>
#include <Eigen/Cholesky>
#include <vector>

namespace euq::hpo {

// Small exact Gaussian-process regressor with a squared-exponential kernel on
// a fixed length-scale. The prior mean is the observation mean and the signal
// variance follows the observation variance (1.0 until two distinct values
// are seen), so predictions stay sane from the very first point.
class GaussianProcess {
 public:
  explicit GaussianProcess(double length_scale = 0.3, double jitter = 1e-6)
      : length_scale_(length_scale), jitter_(jitter) {}

  void fit(const Eigen::MatrixXd& points, const Eigen::VectorXd& values);  // rows = samples

  struct Posterior {
    double mean = 0.0;
    double sd = 0.0;
  };
  Posterior predict(const Eigen::VectorXd& x) const;

  bool fitted() const { return n_ > 0; }
  double length_scale() const { return length_scale_; }
  double signal_variance() const { return signal_variance_; }

 private:
  double kernel(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const;

  double length_scale_;
  double jitter_;
  Eigen::MatrixXd X_;
  Eigen::VectorXd alpha_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
  double prior_mean_ = 0.0;
  double signal_variance_ = 1.0;
  Eigen::Index n_ = 0;
};

// Upper confidence bound acquisition: mean + kappa * sd. kappa must be >= 0.
double ucb(double mean, double sd, double kappa);

}  // namespace euq::hpo

#endif  // EUQ_HPO_GP_HPP_
