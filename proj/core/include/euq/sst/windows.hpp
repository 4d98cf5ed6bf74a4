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

#ifndef EUQ_SST_WINDOWS_HPP_
#define EUQ_SST_WINDOWS_HPP_

#include <vector>

#include "euq/nn/train.hpp"

namespace euq::sst {

// Forecast samples over a coefficient series: input a(t-tau)..a(t) as a
// sequence of tau+1 steps, target a(t+1)..a(t+tau) flattened week-major
// (tau blocks of M coefficients). Sample count is T - 2*tau.
struct WindowedDataset {
  nn::Dataset data;
  std::vector<int> anchors;  // the index t of each sample's last input step
  int tau = 0;
  int n_coefficients = 0;
};

WindowedDataset build_forecast_windows(const Eigen::MatrixXd& coefficients /* M x T */, int tau);

// Splits samples chronologically: the last `valid_fraction` of windows form
// the validation set (at least one sample each side).
std::pair<nn::Dataset, nn::Dataset> chronological_split(const nn::Dataset& all,
                                                        double valid_fraction);

}  // namespace euq::sst

#endif  // EUQ_SST_WINDOWS_HPP_
