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

#include <cmath>
#include <fstream>
#include <sstream>

#include "euq/errors.hpp"
#include "euq/sst/scaling.hpp"
#include "euq/sst/sensors.hpp"
#include "euq/sst/synth.hpp"
#include "euq/sst/windows.hpp"

namespace euq::sst {

WindowedDataset build_forecast_windows(const Eigen::MatrixXd& coefficients, int tau) {
  if (tau < 1) throw ValidationError("window size tau must be positive");
  const Eigen::Index m = coefficients.rows();
  const Eigen::Index t = coefficients.cols();
  const Eigen::Index count = t - 2 * tau;
  if (count < 1) {
    throw ValidationError("series of length " + std::to_string(t) +
                          " is too short for tau = " + std::to_string(tau) +
                          " (needs at least " + std::to_string(2 * tau + 1) + ")");
  }

  WindowedDataset out;
  out.tau = tau;
  out.n_coefficients = static_cast<int>(m);
  out.data.inputs.reserve(static_cast<std::size_t>(count));
  out.data.targets.resize(static_cast<Eigen::Index>(tau) * m, count);
  // Anchor t runs over every index with tau steps of history and tau of future.
  for (Eigen::Index anchor = tau; anchor + tau < t; ++anchor) {
    out.data.inputs.push_back(coefficients.middleCols(anchor - tau, tau + 1));
    const Eigen::Index s = anchor - tau;
    for (int w = 0; w < tau; ++w) {
      out.data.targets.col(s).segment(static_cast<Eigen::Index>(w) * m, m) =
          coefficients.col(anchor + 1 + w);
    }
    out.anchors.push_back(static_cast<int>(anchor));
  }
  return out;
}

std::pair<nn::Dataset, nn::Dataset> chronological_split(const nn::Dataset& all,
                                                        double valid_fraction) {
  if (!(valid_fraction > 0.0) || valid_fraction >= 1.0) {
    throw ValidationError("validation fraction must lie in (0, 1)");
  }
  const Eigen::Index n = all.size();
  if (n < 2) throw ValidationError("need at least two samples to split");
  Eigen::Index n_valid = static_cast<Eigen::Index>(std::lround(valid_fraction * n));
  n_valid = std::max<Eigen::Index>(1, std::min(n - 1, n_valid));
  const Eigen::Index n_train = n - n_valid;

  nn::Dataset train, valid;
  train.inputs.assign(all.inputs.begin(), all.inputs.begin() + n_train);
  train.targets = all.targets.leftCols(n_train);
  valid.inputs.assign(all.inputs.begin() + n_train, all.inputs.end());
  valid.targets = all.targets.rightCols(n_valid);
  return {std::move(train), std::move(valid)};
}

SensorSet sample_sensors(const LandMask& mask, int n, double lat_min, double lat_max,
                         std::uint64_t seed) {
  if (n < 1) throw ValidationError("sensor count must be positive");
  const std::vector<int> band = ocean_flat_indices_in_band(mask, lat_min, lat_max);
  if (static_cast<int>(band.size()) < n) {
    throw ValidationError("band holds " + std::to_string(band.size()) +
                          " ocean cells, cannot place " + std::to_string(n) + " sensors");
  }
  Rng rng(seed);
  const auto picks = rng.sample_without_replacement(band.size(), static_cast<std::size_t>(n));

  // Map flat ocean indices back to grid cells.
  std::vector<int> flat_to_grid(static_cast<std::size_t>(mask.ocean_count));
  int flat = 0;
  for (int c = 0; c < mask.shape.cells(); ++c) {
    if (mask.ocean[static_cast<std::size_t>(c)]) flat_to_grid[static_cast<std::size_t>(flat++)] = c;
  }

  SensorSet s;
  s.lat_min = lat_min;
  s.lat_max = lat_max;
  for (std::size_t i : picks) {
    const int f = band[i];
    s.flat_indices.push_back(f);
    s.grid_indices.push_back(flat_to_grid[static_cast<std::size_t>(f)]);
  }
  return s;
}

Eigen::VectorXd observe(const SensorSet& sensors, const GriddedSnapshot& snapshot) {
  Eigen::VectorXd v(sensors.count());
  for (int i = 0; i < sensors.count(); ++i) {
    v(i) = snapshot.values(sensors.grid_indices[static_cast<std::size_t>(i)]);
  }
  return v;
}

Eigen::VectorXd observe_flat(const SensorSet& sensors, const Eigen::VectorXd& ocean_flat) {
  Eigen::VectorXd v(sensors.count());
  for (int i = 0; i < sensors.count(); ++i) {
    v(i) = ocean_flat(sensors.flat_indices[static_cast<std::size_t>(i)]);
  }
  return v;
}

void save_sensors(const std::filesystem::path& path, const SensorSet& sensors,
                  const LandMask& mask) {
  std::ofstream os(path);
  if (!os) throw DataError("cannot open sensors file for writing: " + path.string());
  os << "sensor,grid_index,flat_index,lat,lon\n";
  for (int i = 0; i < sensors.count(); ++i) {
    const int g = sensors.grid_indices[static_cast<std::size_t>(i)];
    const int h = g / mask.shape.width;
    const int w = g % mask.shape.width;
    os << i << "," << g << "," << sensors.flat_indices[static_cast<std::size_t>(i)] << ","
       << mask.shape.latitude(h) << "," << mask.shape.longitude(w) << "\n";
  }
}

SensorSet load_sensors(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw DataError("cannot open sensors file: " + path.string());
  std::string line;
  if (!std::getline(is, line)) throw DataError("empty sensors file: " + path.string());
  SensorSet s;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string field;
    std::getline(row, field, ',');  // sensor index, unused
    std::getline(row, field, ',');
    s.grid_indices.push_back(std::stoi(field));
    std::getline(row, field, ',');
    s.flat_indices.push_back(std::stoi(field));
  }
  if (s.flat_indices.empty()) throw DataError("sensors file has no rows: " + path.string());
  return s;
}

CoeffScaler CoeffScaler::fit(const Eigen::MatrixXd& train_series) {
  if (train_series.cols() < 2) throw ValidationError("scaler needs at least two samples");
  CoeffScaler s;
  s.mean_ = train_series.rowwise().mean();
  const Eigen::MatrixXd centered = train_series.colwise() - s.mean_;
  s.deviation_ = (centered.array().square().rowwise().sum() /
                  static_cast<double>(train_series.cols()))
                     .sqrt()
                     .matrix();
  s.deviation_ = s.deviation_.array().max(1e-12).matrix();
  return s;
}

Eigen::MatrixXd CoeffScaler::transform(const Eigen::MatrixXd& series) const {
  if (series.rows() != dim()) throw ValidationError("scaler dimension mismatch");
  return (series.colwise() - mean_).array().colwise() / deviation_.array();
}

Eigen::MatrixXd CoeffScaler::inverse_mean(const Eigen::MatrixXd& standardized) const {
  if (standardized.rows() != dim()) throw ValidationError("scaler dimension mismatch");
  return (standardized.array().colwise() * deviation_.array()).matrix().colwise() + mean_;
}

Eigen::MatrixXd CoeffScaler::inverse_variance(const Eigen::MatrixXd& standardized_var) const {
  if (standardized_var.rows() != dim()) throw ValidationError("scaler dimension mismatch");
  return standardized_var.array().colwise() * deviation_.array().square();
}

void CoeffScaler::save(const std::filesystem::path& path) const {
  std::ofstream os(path);
  if (!os) throw DataError("cannot open scaler file for writing: " + path.string());
  os.precision(17);
  os << "coefficient,mean,deviation\n";
  for (Eigen::Index i = 0; i < dim(); ++i) {
    os << i << "," << mean_(i) << "," << deviation_(i) << "\n";
  }
}

CoeffScaler CoeffScaler::load(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw DataError("cannot open scaler file: " + path.string());
  std::string line;
  if (!std::getline(is, line)) throw DataError("empty scaler file: " + path.string());
  std::vector<double> means, devs;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string field;
    std::getline(row, field, ',');
    std::getline(row, field, ',');
    means.push_back(std::stod(field));
    std::getline(row, field, ',');
    devs.push_back(std::stod(field));
  }
  CoeffScaler s;
  s.mean_ = Eigen::Map<Eigen::VectorXd>(means.data(), static_cast<Eigen::Index>(means.size()));
  s.deviation_ = Eigen::Map<Eigen::VectorXd>(devs.data(), static_cast<Eigen::Index>(devs.size()));
  if (s.mean_.size() == 0) throw DataError("scaler file has no rows: " + path.string());
  return s;
}

nn::Dataset Hetero1dData::to_dataset() const {
  nn::Dataset d;
  d.inputs.reserve(static_cast<std::size_t>(x.size()));
  d.targets.resize(1, x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    nn::Sequence s(1, 1);
    s(0, 0) = x(i);
    d.inputs.push_back(std::move(s));
    d.targets(0, i) = y(i);
  }
  return d;
}

Hetero1dData synth_hetero1d(int n, std::uint64_t seed, double noise, double x_min, double x_max) {
  if (n < 0) throw ValidationError("sample count must be nonnegative");
  Hetero1dData d;
  d.noise = noise;
  d.x_min = x_min;
  d.x_max = x_max;
  d.x.resize(n);
  d.y.resize(n);
  Rng rng(seed);
  for (int i = 0; i < n; ++i) {
    const double xi = rng.uniform(x_min, x_max);
    d.x(i) = xi;
    d.y(i) = xi * xi * xi + noise * std::abs(xi) * rng.normal();
  }
  return d;
}

Eigen::MatrixXd synth_wave_field(int n_points, int n_steps, int n_modes, std::uint64_t seed) {
  if (n_points < 1 || n_steps < 1) throw ValidationError("wave field needs positive dimensions");
  if (n_modes < 1 || n_modes > std::min(n_points, n_steps)) {
    throw ValidationError("mode count must lie in [1, min(points, steps)]");
  }
  Rng rng(seed);
  Eigen::MatrixXd field = Eigen::MatrixXd::Zero(n_points, n_steps);
  constexpr double kTwoPi = 6.283185307179586476925286766559;
  for (int m = 0; m < n_modes; ++m) {
    const double amp = 1.0 / (1.0 + m);
    const double k = kTwoPi * (m + 1);
    const double omega = rng.uniform(0.3, 2.5);
    const double phi = rng.uniform(0.0, kTwoPi);
    const double psi = rng.uniform(0.0, kTwoPi);
    Eigen::VectorXd spatial(n_points);
    for (int i = 0; i < n_points; ++i) {
      spatial(i) = amp * std::sin(k * static_cast<double>(i) / n_points + psi);
    }
    for (int t = 0; t < n_steps; ++t) {
      field.col(t) += std::cos(omega * t + phi) * spatial;
    }
  }
  return field;
}

}  // namespace euq::sst
