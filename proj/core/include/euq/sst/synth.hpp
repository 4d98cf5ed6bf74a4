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

#ifndef EUQ_SST_SYNTH_HPP_
#define EUQ_SST_SYNTH_HPP_

#include <Eigen/Core>
#include <cstdint>

#include "euq/nn/train.hpp"

namespace euq::sst {

// Heteroscedastic 1-D regression: y = x^3 + eps with sd(eps) = noise*|x|,
// x uniform on [x_min, x_max].
struct Hetero1dData {
  Eigen::VectorXd x;
  Eigen::VectorXd y;
  double noise = 0.3;
  double x_min = -2.0;
  double x_max = 2.0;

  nn::Dataset to_dataset() const;
  double true_sd(double xi) const { return noise * std::abs(xi); }
};

Hetero1dData synth_hetero1d(int n, std::uint64_t seed, double noise = 0.3, double x_min = -2.0,
                            double x_max = 2.0);

// Separable standing-wave fields on n_points spatial samples over T steps:
// sum over modes of amp_m cos(omega_m t + phi_m) sin(k_m x + psi_m). The
// column space has rank equal to the mode count (mean subtraction included).
Eigen::MatrixXd synth_wave_field(int n_points, int n_steps, int n_modes, std::uint64_t seed);

}  // namespace euq::sst

#endif  // EUQ_SST_SYNTH_HPP_
