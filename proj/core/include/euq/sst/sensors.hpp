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

#ifndef EUQ_SST_SENSORS_HPP_
#define EUQ_SST_SENSORS_HPP_

#include <filesystem>

#include "euq/rng.hpp"
#include "euq/sst/grid.hpp"

namespace euq::sst {

// Sparse observation operator: distinct ocean cells inside a latitude band,
// addressed both on the grid and in the flattened ocean vector.
struct SensorSet {
  std::vector<int> grid_indices;
  std::vector<int> flat_indices;
  double lat_min = -50.0;
  double lat_max = 50.0;

  int count() const { return static_cast<int>(flat_indices.size()); }
};

// Uniform draw without replacement over the band's ocean cells.
SensorSet sample_sensors(const LandMask& mask, int n, double lat_min, double lat_max,
                         std::uint64_t seed);

Eigen::VectorXd observe(const SensorSet& sensors, const GriddedSnapshot& snapshot);
Eigen::VectorXd observe_flat(const SensorSet& sensors, const Eigen::VectorXd& ocean_flat);

// CSV with header sensor,grid_index,flat_index,lat,lon.
void save_sensors(const std::filesystem::path& path, const SensorSet& sensors,
                  const LandMask& mask);
SensorSet load_sensors(const std::filesystem::path& path);

}  // namespace euq::sst

#endif  // EUQ_SST_SENSORS_HPP_
