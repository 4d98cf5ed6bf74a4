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

#ifndef EUQ_HPO_BO_HPP_
#define EUQ_HPO_BO_HPP_

#include <cstddef>
#include <vector>

#include "euq/hpo/gp.hpp"
#include "euq/hpo/space.hpp"

namespace euq::hpo {

enum class LiarMode { kMin, kMean, kMax };

LiarMode liar_mode_from_string(const std::string& s);
std::string to_string(LiarMode m);

struct BoConfig {
  double kappa = 1.96;        // UCB exploration weight, >= 0
  LiarMode liar = LiarMode::kMean;
  int candidate_pool = 512;   // fresh uniform samples ranked per pick
  double gp_length_scale = 0.3;
  double gp_jitter = 1e-6;
};

// Asynchronous Bayesian optimizer over a HyperSpace. Objectives are
// maximized. Pending (asked but untold) points carry an imputed constant-liar
// objective so a batch of q asks yields q distinct, mutually aware picks.
class BoOptimizer {
 public:
  BoOptimizer(HyperSpace space, BoConfig cfg = {});

  // Records a finished evaluation, clearing one matching liar entry if
  // present, and refits the surrogate. Non-finite scores are rejected.
  void tell(const HyperConfig& cfg, double score);

  // Proposes q pairwise-distinct configurations by ranking candidate pools
  // with UCB; registers a liar entry per pick. With no observations yet the
  // picks are uniform random.
  std::vector<HyperConfig> ask(int q, Rng& rng);

  const HyperSpace& space() const { return space_; }
  const BoConfig& config() const { return config_; }
  std::size_t n_observed() const { return observed_x_.size(); }
  std::size_t n_liars() const { return liar_configs_.size(); }

  // Posterior of the surrogate currently in use (observations + liars).
  GaussianProcess::Posterior predict(const HyperConfig& cfg) const;

 private:
  double liar_value() const;
  void refit();

  HyperSpace space_;
  BoConfig config_;
  GaussianProcess gp_;
  std::vector<Eigen::VectorXd> observed_x_;
  std::vector<double> observed_y_;
  std::vector<HyperConfig> liar_configs_;
  std::vector<Eigen::VectorXd> liar_x_;
  std::vector<double> liar_y_;
};

}  // namespace euq::hpo

#endif  // EUQ_HPO_BO_HPP_
