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

#include "euq/sst/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "euq/errors.hpp"

namespace euq::sst {

std::vector<int> region_flat_indices(const LandMask& mask, const LatLonRegion& region) {
  std::vector<int> out;
  int flat = 0;
  for (int h = 0; h < mask.shape.height; ++h) {
    const double lat = mask.shape.latitude(h);
    for (int w = 0; w < mask.shape.width; ++w) {
      if (!mask.is_ocean(h, w)) continue;
      const double lon = mask.shape.longitude(w);
      if (lat >= region.lat_min && lat <= region.lat_max && lon >= region.lon_min &&
          lon <= region.lon_max) {
        out.push_back(flat);
      }
      ++flat;
    }
  }
  return out;
}

PointwiseErrors::PointwiseErrors(Eigen::Index n_points, int n_weeks)
    : sq_sum_(Eigen::MatrixXd::Zero(n_points, n_weeks)),
      counts_(static_cast<std::size_t>(n_weeks), 0) {
  if (n_points < 1 || n_weeks < 1) throw ValidationError("empty error accumulator");
}

void PointwiseErrors::add(int week, const Eigen::VectorXd& prediction,
                          const Eigen::VectorXd& truth) {
  if (week < 0 || week >= n_weeks()) throw ValidationError("lead week out of range");
  if (prediction.size() != sq_sum_.rows() || truth.size() != sq_sum_.rows()) {
    throw ValidationError("field length does not match accumulator");
  }
  sq_sum_.col(week) += (prediction - truth).array().square().matrix();
  counts_[static_cast<std::size_t>(week)] += 1;
}

double PointwiseErrors::rmse(int week, const std::vector<int>& cells) const {
  if (week < 0 || week >= n_weeks()) throw ValidationError("lead week out of range");
  const int n_windows = counts_[static_cast<std::size_t>(week)];
  if (n_windows == 0) throw ValidationError("no windows accumulated at this week");
  double sum = 0.0;
  std::size_t n_cells = 0;
  if (cells.empty()) {
    sum = sq_sum_.col(week).sum();
    n_cells = static_cast<std::size_t>(sq_sum_.rows());
  } else {
    for (int c : cells) sum += sq_sum_(c, week);
    n_cells = cells.size();
  }
  if (n_cells == 0) throw ValidationError("empty cell selection");
  return std::sqrt(sum / (static_cast<double>(n_cells) * n_windows));
}

Eigen::VectorXd PointwiseErrors::per_point_rmse(int week) const {
  if (week < 0 || week >= n_weeks()) throw ValidationError("lead week out of range");
  const int n_windows = counts_[static_cast<std::size_t>(week)];
  if (n_windows == 0) throw ValidationError("no windows accumulated at this week");
  return (sq_sum_.col(week) / static_cast<double>(n_windows)).array().sqrt();
}

namespace {

PointwiseErrors accumulate(const std::vector<std::vector<Eigen::VectorXd>>& predictions,
                           const std::vector<std::vector<Eigen::VectorXd>>& truth) {
  if (predictions.empty() || predictions.size() != truth.size()) {
    throw ValidationError("prediction/truth series misaligned");
  }
  const int n_weeks = static_cast<int>(predictions[0].size());
  PointwiseErrors pe(predictions[0][0].size(), n_weeks);
  for (std::size_t w = 0; w < predictions.size(); ++w) {
    for (int k = 0; k < n_weeks; ++k) {
      pe.add(k, predictions[w][static_cast<std::size_t>(k)], truth[w][static_cast<std::size_t>(k)]);
    }
  }
  return pe;
}

}  // namespace

double rmse_per_week(const std::vector<std::vector<Eigen::VectorXd>>& predictions,
                     const std::vector<std::vector<Eigen::VectorXd>>& truth, int week) {
  return accumulate(predictions, truth).rmse(week);
}

double region_rmse(const std::vector<std::vector<Eigen::VectorXd>>& predictions,
                   const std::vector<std::vector<Eigen::VectorXd>>& truth, int week,
                   const LandMask& mask, const LatLonRegion& region) {
  const std::vector<int> cells = region_flat_indices(mask, region);
  if (cells.empty()) throw ValidationError("region contains no ocean cells");
  return accumulate(predictions, truth).rmse(week, cells);
}

double relative_l2(const Eigen::VectorXd& prediction, const Eigen::VectorXd& truth) {
  if (prediction.size() != truth.size()) throw ValidationError("field shapes differ");
  const double denom = truth.norm();
  if (denom == 0.0) throw ValidationError("truth field has zero norm");
  return (prediction - truth).norm() / denom;
}

double mean_relative_l2(const Eigen::MatrixXd& predictions, const Eigen::MatrixXd& truth) {
  if (predictions.rows() != truth.rows() || predictions.cols() != truth.cols()) {
    throw ValidationError("field shapes differ");
  }
  if (truth.cols() == 0) throw ValidationError("empty test set");
  double sum = 0.0;
  for (Eigen::Index t = 0; t < truth.cols(); ++t) {
    sum += relative_l2(predictions.col(t), truth.col(t));
  }
  return sum / static_cast<double>(truth.cols());
}

Histogram rmse_histogram(const Eigen::VectorXd& values, int n_bins, double max_value) {
  if (n_bins < 1) throw ValidationError("histogram needs at least one bin");
  if (!(max_value > 0.0)) throw ValidationError("histogram maximum must be positive");
  Histogram h;
  h.edges.resize(static_cast<std::size_t>(n_bins) + 1);
  for (int b = 0; b <= n_bins; ++b) {
    h.edges[static_cast<std::size_t>(b)] = max_value * b / n_bins;
  }
  h.counts.assign(static_cast<std::size_t>(n_bins), 0);
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    int b = static_cast<int>(values(i) / max_value * n_bins);
    b = std::clamp(b, 0, n_bins - 1);  // top edge and beyond land in the last bin
    h.counts[static_cast<std::size_t>(b)] += 1;
  }
  return h;
}

std::vector<long> histogram_diff(const Histogram& ensemble, const Histogram& member) {
  if (ensemble.edges != member.edges) throw ValidationError("histograms use different bin edges");
  std::vector<long> diff(ensemble.counts.size());
  for (std::size_t b = 0; b < diff.size(); ++b) diff[b] = ensemble.counts[b] - member.counts[b];
  return diff;
}

double pearson(const Eigen::VectorXd& a, const Eigen::VectorXd& b, const std::vector<int>& cells) {
  if (a.size() != b.size()) throw ValidationError("series lengths differ");
  Eigen::VectorXd x = a, y = b;
  if (!cells.empty()) {
    x.resize(static_cast<Eigen::Index>(cells.size()));
    y.resize(static_cast<Eigen::Index>(cells.size()));
    for (std::size_t i = 0; i < cells.size(); ++i) {
      x(static_cast<Eigen::Index>(i)) = a(cells[i]);
      y(static_cast<Eigen::Index>(i)) = b(cells[i]);
    }
  }
  if (x.size() < 2) throw ValidationError("correlation needs at least two samples");
  const double mx = x.mean(), my = y.mean();
  const Eigen::ArrayXd dx = x.array() - mx, dy = y.array() - my;
  const double denom = std::sqrt(dx.square().sum() * dy.square().sum());
  if (denom == 0.0) throw ValidationError("correlation undefined for constant series");
  return (dx * dy).sum() / denom;
}

}  // namespace euq::sst
