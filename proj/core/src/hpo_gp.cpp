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

#include "euq/hpo/gp.hpp"

#include <cmath>

#include "euq/errors.hpp"

namespace euq::hpo {

double GaussianProcess::kernel(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const {
  const double d2 = (a - b).squaredNorm();
  return signal_variance_ * std::exp(-d2 / (2.0 * length_scale_ * length_scale_));
}

void GaussianProcess::fit(const Eigen::MatrixXd& points, const Eigen::VectorXd& values) {
  if (points.rows() != values.size()) throw ValidationError("GP point/value count mismatch");
  n_ = points.rows();
  if (n_ == 0) return;
  X_ = points;
  prior_mean_ = values.mean();
  const double var = (values.array() - prior_mean_).square().sum() / static_cast<double>(n_);
  signal_variance_ = (n_ >= 2 && var > 1e-12) ? var : 1.0;

  Eigen::MatrixXd K(n_, n_);
  for (Eigen::Index i = 0; i < n_; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      const double k = kernel(X_.row(i).transpose(), X_.row(j).transpose());
      K(i, j) = k;
      K(j, i) = k;
    }
    K(i, i) += jitter_;
  }
  llt_.compute(K);
  if (llt_.info() != Eigen::Success) throw NumericError("GP kernel matrix not positive definite");
  alpha_ = llt_.solve((values.array() - prior_mean_).matrix().eval());
}

GaussianProcess::Posterior GaussianProcess::predict(const Eigen::VectorXd& x) const {
  if (n_ == 0) return {0.0, std::sqrt(signal_variance_)};
  Eigen::VectorXd k(n_);
  for (Eigen::Index i = 0; i < n_; ++i) k(i) = kernel(X_.row(i).transpose(), x);
  const double mean = prior_mean_ + k.dot(alpha_);
  const Eigen::VectorXd w = llt_.solve(k);
  const double var = signal_variance_ - k.dot(w);
  return {mean, std::sqrt(var > 0.0 ? var : 0.0)};
}

double ucb(double mean, double sd, double kappa) {
  if (kappa < 0.0) throw ValidationError("UCB kappa must be nonnegative");
  if (sd < 0.0) throw ValidationError("UCB sd must be nonnegative");
  return mean + kappa * sd;
}

}  // namespace euq::hpo
