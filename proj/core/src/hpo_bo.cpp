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

#include "euq/hpo/bo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "euq/errors.hpp"

namespace euq::hpo {

LiarMode liar_mode_from_string(const std::string& s) {
  if (s == "min") return LiarMode::kMin;
  if (s == "mean") return LiarMode::kMean;
  if (s == "max") return LiarMode::kMax;
  throw ValidationError("unknown liar mode: " + s);
}

std::string to_string(LiarMode m) {
  switch (m) {
    case LiarMode::kMin: return "min";
    case LiarMode::kMean: return "mean";
    case LiarMode::kMax: return "max";
  }
  return "?";
}

BoOptimizer::BoOptimizer(HyperSpace space, BoConfig cfg)
    : space_(std::move(space)), config_(cfg), gp_(cfg.gp_length_scale, cfg.gp_jitter) {
  validate(space_);
  if (config_.kappa < 0.0) throw ValidationError("kappa must be nonnegative");
  if (config_.candidate_pool < 1) throw ValidationError("candidate pool must be positive");
}

double BoOptimizer::liar_value() const {
  if (observed_y_.empty()) return 0.0;
  switch (config_.liar) {
    case LiarMode::kMin: return *std::min_element(observed_y_.begin(), observed_y_.end());
    case LiarMode::kMax: return *std::max_element(observed_y_.begin(), observed_y_.end());
    case LiarMode::kMean: {
      double s = 0.0;
      for (double y : observed_y_) s += y;
      return s / static_cast<double>(observed_y_.size());
    }
  }
  return 0.0;
}

void BoOptimizer::refit() {
  const Eigen::Index n = static_cast<Eigen::Index>(observed_x_.size() + liar_x_.size());
  if (n == 0) return;
  Eigen::MatrixXd X(n, space_.encoded_dim());
  Eigen::VectorXd y(n);
  Eigen::Index r = 0;
  for (std::size_t i = 0; i < observed_x_.size(); ++i, ++r) {
    X.row(r) = observed_x_[i].transpose();
    y(r) = observed_y_[i];
  }
  for (std::size_t i = 0; i < liar_x_.size(); ++i, ++r) {
    X.row(r) = liar_x_[i].transpose();
    y(r) = liar_y_[i];
  }
  gp_.fit(X, y);
}

void BoOptimizer::tell(const HyperConfig& cfg, double score) {
  if (!std::isfinite(score)) throw ValidationError("BO scores must be finite");
  validate(space_, cfg);
  const auto it = std::find(liar_configs_.begin(), liar_configs_.end(), cfg);
  if (it != liar_configs_.end()) {
    const std::size_t i = static_cast<std::size_t>(it - liar_configs_.begin());
    liar_configs_.erase(liar_configs_.begin() + static_cast<std::ptrdiff_t>(i));
    liar_x_.erase(liar_x_.begin() + static_cast<std::ptrdiff_t>(i));
    liar_y_.erase(liar_y_.begin() + static_cast<std::ptrdiff_t>(i));
  }
  observed_x_.push_back(encode(space_, cfg));
  observed_y_.push_back(score);
  refit();
}

std::vector<HyperConfig> BoOptimizer::ask(int q, Rng& rng) {
  if (q < 1) throw ValidationError("ask requires q >= 1");
  std::vector<HyperConfig> picks;
  picks.reserve(static_cast<std::size_t>(q));
  const bool guided = !observed_y_.empty();

  for (int j = 0; j < q; ++j) {
    HyperConfig chosen;
    bool have = false;
    if (!guided) {
      // No information yet: uniform random, distinct from earlier picks.
      do {
        chosen = random_sample(space_, rng);
      } while (std::find(picks.begin(), picks.end(), chosen) != picks.end());
      have = true;
    } else {
      double best_score = -std::numeric_limits<double>::infinity();
      for (int c = 0; c < config_.candidate_pool; ++c) {
        const HyperConfig cand = random_sample(space_, rng);
        if (std::find(picks.begin(), picks.end(), cand) != picks.end()) continue;
        const auto post = gp_.predict(encode(space_, cand));
        const double score = ucb(post.mean, post.sd, config_.kappa);
        if (score > best_score) {
          best_score = score;
          chosen = cand;
          have = true;
        }
      }
      // Vanishingly unlikely: the whole pool collided with earlier picks.
      while (!have || std::find(picks.begin(), picks.end(), chosen) != picks.end()) {
        chosen = random_sample(space_, rng);
        have = true;
      }
    }
    picks.push_back(chosen);
    liar_configs_.push_back(chosen);
    liar_x_.push_back(encode(space_, chosen));
    liar_y_.push_back(liar_value());
    refit();
  }
  return picks;
}

GaussianProcess::Posterior BoOptimizer::predict(const HyperConfig& cfg) const {
  return gp_.predict(encode(space_, cfg));
}

}  // namespace euq::hpo
