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

#include "euq/sst/grid.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>

#include "euq/errors.hpp"

namespace euq::sst {

namespace {

void write_u32_le(std::ostream& os, std::uint32_t v) {
  unsigned char buf[4];
  for (int i = 0; i < 4; ++i) buf[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
  os.write(reinterpret_cast<const char*>(buf), 4);
}

std::uint32_t read_u32_le(std::istream& is) {
  unsigned char buf[4];
  is.read(reinterpret_cast<char*>(buf), 4);
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(buf[i]) << (8 * i);
  return v;
}

void write_f32_le(std::ostream& os, float f) {
  std::uint32_t bits;
  std::memcpy(&bits, &f, 4);
  write_u32_le(os, bits);
}

float read_f32_le(const unsigned char* buf) {
  std::uint32_t bits = 0;
  for (int i = 0; i < 4; ++i) bits |= static_cast<std::uint32_t>(buf[i]) << (8 * i);
  float f;
  std::memcpy(&f, &bits, 4);
  return f;
}

void expect_magic(std::istream& is, const char* magic, const std::filesystem::path& path) {
  char buf[4];
  is.read(buf, 4);
  if (!is || std::string(buf, 4) != magic) {
    throw DataError("bad magic in " + path.string() + ", expected " + magic);
  }
}

// Reads one snapshot worth of f32 payload and scatters ocean cells.
void read_snapshot_payload(std::istream& is, const LandMask& mask, std::size_t week,
                           const std::filesystem::path& path, Eigen::VectorXd* grid_out,
                           double* ocean_out) {
  const std::size_t cells = static_cast<std::size_t>(mask.shape.cells());
  std::vector<unsigned char> buf(cells * 4);
  is.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
  if (!is) throw DataError("truncated snapshot payload in " + path.string());
  std::size_t ocean_i = 0;
  for (std::size_t c = 0; c < cells; ++c) {
    const double v = static_cast<double>(read_f32_le(buf.data() + 4 * c));
    const bool ocean = mask.ocean[c] != 0;
    if (ocean && !std::isfinite(v)) {
      throw DataError("non-finite ocean value at cell " + std::to_string(c) + " of snapshot " +
                      std::to_string(week) + " in " + path.string());
    }
    if (grid_out) (*grid_out)(static_cast<Eigen::Index>(c)) = ocean ? v : land_sentinel();
    if (ocean_out && ocean) ocean_out[ocean_i++] = v;
  }
}

}  // namespace

double land_sentinel() { return std::numeric_limits<double>::quiet_NaN(); }

LandMask make_mask(GridShape shape, std::vector<std::uint8_t> ocean) {
  if (static_cast<int>(ocean.size()) != shape.cells()) {
    throw ValidationError("mask size does not match grid shape");
  }
  LandMask mask{shape, std::move(ocean), 0};
  for (std::uint8_t b : mask.ocean) mask.ocean_count += b != 0;
  if (mask.ocean_count == 0) throw ValidationError("mask has no ocean cells");
  return mask;
}

LandMask load_mask(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw DataError("cannot open mask: " + path.string());
  expect_magic(is, "MSK1", path);
  const std::uint32_t h = read_u32_le(is);
  const std::uint32_t w = read_u32_le(is);
  if (!is || h == 0 || w == 0) throw DataError("bad mask header in " + path.string());
  std::vector<std::uint8_t> ocean(static_cast<std::size_t>(h) * w);
  is.read(reinterpret_cast<char*>(ocean.data()), static_cast<std::streamsize>(ocean.size()));
  if (!is) throw DataError("truncated mask in " + path.string());
  return make_mask(GridShape{static_cast<int>(h), static_cast<int>(w)}, std::move(ocean));
}

void save_mask(const std::filesystem::path& path, const LandMask& mask) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw DataError("cannot open mask for writing: " + path.string());
  os.write("MSK1", 4);
  write_u32_le(os, static_cast<std::uint32_t>(mask.shape.height));
  write_u32_le(os, static_cast<std::uint32_t>(mask.shape.width));
  os.write(reinterpret_cast<const char*>(mask.ocean.data()),
           static_cast<std::streamsize>(mask.ocean.size()));
  if (!os) throw DataError("short write to mask: " + path.string());
}

std::vector<GriddedSnapshot> load_snapshots(const std::filesystem::path& path,
                                            const LandMask& mask) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw DataError("cannot open snapshots: " + path.string());
  expect_magic(is, "SST1", path);
  const std::uint32_t t = read_u32_le(is);
  const std::uint32_t h = read_u32_le(is);
  const std::uint32_t w = read_u32_le(is);
  if (!is) throw DataError("bad snapshot header in " + path.string());
  if (static_cast<int>(h) != mask.shape.height || static_cast<int>(w) != mask.shape.width) {
    throw DataError("snapshot grid " + std::to_string(w) + "x" + std::to_string(h) +
                    " does not match mask");
  }
  std::vector<GriddedSnapshot> snaps;
  snaps.reserve(t);
  for (std::uint32_t i = 0; i < t; ++i) {
    GriddedSnapshot s;
    s.shape = mask.shape;
    s.week = static_cast<int>(i);
    s.values.resize(mask.shape.cells());
    read_snapshot_payload(is, mask, i, path, &s.values, nullptr);
    snaps.push_back(std::move(s));
  }
  return snaps;
}

void save_snapshots(const std::filesystem::path& path, const std::vector<GriddedSnapshot>& snaps) {
  if (snaps.empty()) throw ValidationError("no snapshots to save");
  std::ofstream os(path, std::ios::binary);
  if (!os) throw DataError("cannot open snapshots for writing: " + path.string());
  os.write("SST1", 4);
  write_u32_le(os, static_cast<std::uint32_t>(snaps.size()));
  write_u32_le(os, static_cast<std::uint32_t>(snaps[0].shape.height));
  write_u32_le(os, static_cast<std::uint32_t>(snaps[0].shape.width));
  for (const GriddedSnapshot& s : snaps) {
    if (!(s.shape == snaps[0].shape)) throw ValidationError("snapshot shapes differ");
    for (Eigen::Index c = 0; c < s.values.size(); ++c) {
      write_f32_le(os, static_cast<float>(s.values(c)));
    }
  }
  if (!os) throw DataError("short write to snapshots: " + path.string());
}

Eigen::MatrixXd load_ocean_matrix(const std::filesystem::path& path, const LandMask& mask) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw DataError("cannot open snapshots: " + path.string());
  expect_magic(is, "SST1", path);
  const std::uint32_t t = read_u32_le(is);
  const std::uint32_t h = read_u32_le(is);
  const std::uint32_t w = read_u32_le(is);
  if (!is) throw DataError("bad snapshot header in " + path.string());
  if (static_cast<int>(h) != mask.shape.height || static_cast<int>(w) != mask.shape.width) {
    throw DataError("snapshot grid does not match mask");
  }
  Eigen::MatrixXd ocean(mask.ocean_count, static_cast<Eigen::Index>(t));
  for (std::uint32_t i = 0; i < t; ++i) {
    read_snapshot_payload(is, mask, i, path, nullptr, ocean.col(static_cast<Eigen::Index>(i)).data());
  }
  return ocean;
}

Eigen::VectorXd flatten_ocean(const GriddedSnapshot& snapshot, const LandMask& mask) {
  if (!(snapshot.shape == mask.shape)) throw ValidationError("snapshot/mask shape mismatch");
  Eigen::VectorXd flat(mask.ocean_count);
  Eigen::Index j = 0;
  for (int c = 0; c < mask.shape.cells(); ++c) {
    if (mask.ocean[static_cast<std::size_t>(c)]) flat(j++) = snapshot.values(c);
  }
  return flat;
}

GriddedSnapshot unflatten_ocean(const Eigen::VectorXd& flat, const LandMask& mask) {
  if (flat.size() != mask.ocean_count) {
    throw ValidationError("flat vector length " + std::to_string(flat.size()) +
                          " does not match ocean count " + std::to_string(mask.ocean_count));
  }
  GriddedSnapshot s;
  s.shape = mask.shape;
  s.values.resize(mask.shape.cells());
  Eigen::Index j = 0;
  for (int c = 0; c < mask.shape.cells(); ++c) {
    s.values(c) = mask.ocean[static_cast<std::size_t>(c)] ? flat(j++) : land_sentinel();
  }
  return s;
}

std::vector<int> ocean_flat_indices_in_band(const LandMask& mask, double lat_min, double lat_max) {
  std::vector<int> out;
  int flat = 0;
  for (int h = 0; h < mask.shape.height; ++h) {
    const double lat = mask.shape.latitude(h);
    for (int w = 0; w < mask.shape.width; ++w) {
      if (!mask.is_ocean(h, w)) continue;
      if (lat >= lat_min && lat <= lat_max) out.push_back(flat);
      ++flat;
    }
  }
  return out;
}

}  // namespace euq::sst
