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

#include "euq/report/report.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <limits>
#include <sstream>

#include "euq/errors.hpp"

namespace euq::report {

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
    : path_(path.string()), os_(std::make_shared<std::ofstream>(path)), n_fields_(header.size()) {
  if (!*os_) throw DataError("cannot open CSV for writing: " + path_);
  row(header);
}

void CsvWriter::row(const std::vector<std::string>& fields) {
  if (fields.size() != n_fields_) {
    throw ValidationError("CSV row has " + std::to_string(fields.size()) + " fields, expected " +
                          std::to_string(n_fields_));
  }
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) *os_ << ",";
    *os_ << fields[i];
  }
  *os_ << "\n";
  os_->flush();
  if (!*os_) throw DataError("short write to CSV: " + path_);
}

std::string CsvWriter::num(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

void write_pgm16(const std::filesystem::path& path, const sst::GriddedSnapshot& field) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < field.values.size(); ++i) {
    const double v = field.values(i);
    if (std::isfinite(v)) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  if (!std::isfinite(lo)) throw ValidationError("field has no finite values to render");
  const double span = hi > lo ? hi - lo : 1.0;

  std::ofstream os(path, std::ios::binary);
  if (!os) throw DataError("cannot open PGM for writing: " + path.string());
  os << "P5\n" << field.shape.width << " " << field.shape.height << "\n65535\n";
  // Image rows run north to south.
  for (int h = field.shape.height - 1; h >= 0; --h) {
    for (int w = 0; w < field.shape.width; ++w) {
      const double v = field.at(h, w);
      std::uint16_t p = 0;
      if (std::isfinite(v)) {
        p = static_cast<std::uint16_t>(1 + std::lround((v - lo) / span * 65534.0));
      }
      const unsigned char bytes[2] = {static_cast<unsigned char>(p >> 8),
                                      static_cast<unsigned char>(p & 0xff)};
      os.write(reinterpret_cast<const char*>(bytes), 2);
    }
  }
  if (!os) throw DataError("short write to PGM: " + path.string());

  std::ofstream scale(path.string() + ".scale");
  if (!scale) throw DataError("cannot open PGM scale sidecar: " + path.string() + ".scale");
  scale.precision(17);
  scale << "min " << lo << "\nmax " << hi << "\nland 0\n";
}

std::vector<ConvergencePoint> convergence_series(const search::Catalog& catalog, int window) {
  if (window < 1) throw ValidationError("moving-average window must be positive");
  std::vector<ConvergencePoint> out;
  std::deque<double> recent;
  double sum = 0.0;
  int index = 0;
  for (const auto& r : catalog) {
    if (!r.usable()) continue;
    ++index;
    const double objective = -r.valid_nll;
    recent.push_back(objective);
    sum += objective;
    if (static_cast<int>(recent.size()) > window) {
      sum -= recent.front();
      recent.pop_front();
    }
    out.push_back({index, r.id, objective, sum / static_cast<double>(recent.size())});
  }
  return out;
}

std::vector<search::CatalogRecord> model_spectrum(const search::Catalog& catalog) {
  std::vector<search::CatalogRecord> usable;
  for (const auto& r : catalog) {
    if (r.usable()) usable.push_back(r);
  }
  std::stable_sort(usable.begin(), usable.end(),
                   [](const search::CatalogRecord& a, const search::CatalogRecord& b) {
                     if (a.valid_nll != b.valid_nll) return a.valid_nll < b.valid_nll;
                     return a.id < b.id;
                   });
  return usable;
}

int population_fill_index(const search::Catalog& catalog, int population_size) {
  int usable = 0, index = 0;
  for (const auto& r : catalog) {
    ++index;
    if (r.usable()) ++usable;
    if (usable == population_size) return index;
  }
  return 0;
}

}  // namespace euq::report
