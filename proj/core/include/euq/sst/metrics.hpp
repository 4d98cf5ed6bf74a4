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

#ifndef EUQ_SST_METRICS_HPP_
#define EUQ_SST_METRICS_HPP_

#include <Eigen/Core>
#include <vector>

#include "euq/sst/grid.hpp"

namespace euq::sst {

// Inclusive degree box on cell centers.
struct LatLonRegion {
  double lat_min = -90.0;
  double lat_max = 90.0;
  double lon_min = 0.0;
  double lon_max = 360.0;

  // Default evaluation region: the Eastern Pacific box.
  static LatLonRegion eastern_pacific() { return {-10.0, 10.0, 200.0, 250.0}; }
};

// Flat (ocean-vector) indices of ocean cells inside the region.
std::vector<int> region_flat_indices(const LandMask& mask, const LatLonRegion& region);

// Streaming accumulator of squared forecast errors per ocean cell and lead
// week; all derived metrics come from here.
class PointwiseErrors {
 public:
  PointwiseErrors(Eigen::Index n_points, int n_weeks);

  // One window's error at one lead week (0-based), over the flattened ocean.
  void add(int week, const Eigen::VectorXd& prediction, const Eigen::VectorXd& truth);

  int windows_at(int week) const { return counts_[static_cast<std::size_t>(week)]; }
  int n_weeks() const { return static_cast<int>(counts_.size()); }

  // Pooled RMSE over windows and the given cells (all cells when empty).
  double rmse(int week, const std::vector<int>& cells = {}) const;

  // Per-cell RMSE map at a lead week.
  Eigen::VectorXd per_point_rmse(int week) const;

 private:
  Eigen::MatrixXd sq_sum_;  // n_points x n_weeks
  std::vector<int> counts_;
};

// Pooled RMSE over aligned prediction/truth series at one lead week.
// predictions[window][week] is a flattened ocean field.
double rmse_per_week(const std::vector<std::vector<Eigen::VectorXd>>& predictions,
                     const std::vector<std::vector<Eigen::VectorXd>>& truth, int week);

double region_rmse(const std::vector<std::vector<Eigen::VectorXd>>& predictions,
                   const std::vector<std::vector<Eigen::VectorXd>>& truth, int week,
                   const LandMask& mask, const LatLonRegion& region);

// ||pred - truth|| / ||truth|| for one snapshot pair.
double relative_l2(const Eigen::VectorXd& prediction, const Eigen::VectorXd& truth);

// Mean of per-snapshot relative errors over a test set (columns).
double mean_relative_l2(const Eigen::MatrixXd& predictions, const Eigen::MatrixXd& truth);

// Uniform-bin histogram over [0, max value]; counts conserve the sample size.
struct Histogram {
  std::vector<double> edges;   // n_bins + 1
  std::vector<long> counts;    // n_bins
};

Histogram rmse_histogram(const Eigen::VectorXd& values, int n_bins, double max_value);

// ensemble - member, per shared bin.
std::vector<long> histogram_diff(const Histogram& ensemble, const Histogram& member);

// Pearson correlation over the given cells (all when empty).
double pearson(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
               const std::vector<int>& cells = {});

}  // namespace euq::sst

#endif  // EUQ_SST_METRICS_HPP_
