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

#ifndef EUQ_SST_GRID_HPP_
#define EUQ_SST_GRID_HPP_

#include <Eigen/Core>
#include <filesystem>
#include <vector>

namespace euq::sst {

// Grid geometry: height rows of latitude (index 0 at the south pole edge),
// width columns of longitude, longitude varying fastest in storage. Cell
// centers sit at lat = h - (height-1)/2 * 1 degree steps for the standard
// one-degree grid (-89.5..89.5) and lon = w + 0.5 (0.5..359.5).
struct GridShape {
  int height = 180;
  int width = 360;

  int cells() const { return height * width; }
  int index(int h, int w) const { return h * width + w; }
  double latitude(int h) const { return h - (height - 1) * 0.5; }
  double longitude(int w) const { return w + 0.5; }
  bool operator==(const GridShape&) const = default;
};

// true = ocean. Fixed across a dataset.
struct LandMask {
  GridShape shape;
  std::vector<std::uint8_t> ocean;
  int ocean_count = 0;

  bool is_ocean(int h, int w) const { return ocean[static_cast<std::size_t>(shape.index(h, w))] != 0; }
};

LandMask make_mask(GridShape shape, std::vector<std::uint8_t> ocean);

// One temperature field (degC). Land cells hold NaN, which every metric and
// transform ignores.
struct GriddedSnapshot {
  GridShape shape;
  int week = 0;
  Eigen::VectorXd values;  // shape.cells(), longitude-fastest

  double at(int h, int w) const { return values(shape.index(h, w)); }
};

// Land sentinel written into grid cells outside the mask.
double land_sentinel();

// Mask file: "MSK1" magic, height and width as little-endian u32, then
// height*width bytes, 1 = ocean.
LandMask load_mask(const std::filesystem::path& path);
void save_mask(const std::filesystem::path& path, const LandMask& mask);

// Snapshot file: "SST1" magic, T, height, width as little-endian u32, then
// T*height*width little-endian f32, longitude fastest. Ocean cells must be
// finite; land cells are replaced by the sentinel on load.
std::vector<GriddedSnapshot> load_snapshots(const std::filesystem::path& path,
                                            const LandMask& mask);
void save_snapshots(const std::filesystem::path& path, const std::vector<GriddedSnapshot>& snaps);

// Streaming load of the flattened ocean matrix (ocean_count x T), avoiding
// per-snapshot grid materialization.
Eigen::MatrixXd load_ocean_matrix(const std::filesystem::path& path, const LandMask& mask);

// Keeps ocean cells in storage order; bijective against unflatten_ocean.
Eigen::VectorXd flatten_ocean(const GriddedSnapshot& snapshot, const LandMask& mask);
GriddedSnapshot unflatten_ocean(const Eigen::VectorXd& flat, const LandMask& mask);

// Flat (ocean-vector) indices of every ocean cell whose latitude lies in
// [lat_min, lat_max], in storage order.
std::vector<int> ocean_flat_indices_in_band(const LandMask& mask, double lat_min, double lat_max);

}  // namespace euq::sst

#endif  // EUQ_SST_GRID_HPP_
