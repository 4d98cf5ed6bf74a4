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

#ifndef EUQ_REPORT_REPORT_HPP_
#define EUQ_REPORT_REPORT_HPP_

#include <filesystem>
#include <fstream>
#include <memory>
#include <string>
#include <vector>

#include "euq/search/types.hpp"
#include "euq/sst/grid.hpp"

namespace euq::report {

// Minimal CSV emitter; fields are written verbatim (no quoting needed for
// the numeric tables produced here).
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);
  void row(const std::vector<std::string>& fields);

  static std::string num(double v);

 private:
  std::string path_;
  std::shared_ptr<std::ofstream> os_;
  std::size_t n_fields_;
};

// 16-bit binary PGM (P5, maxval 65535, big-endian samples per the format).
// Finite values map linearly onto [1, 65535]; non-finite cells (land) render
// as 0. Row 0 of the image is the northernmost latitude row. A text sidecar
// "<path>.scale" records the value range: pixel p>0 means
// min + (p-1)/65534*(max-min).
void write_pgm16(const std::filesystem::path& path, const sst::GriddedSnapshot& field);

// Moving average (window 25 by default) of the validation objective over
// usable catalog records in completion order.
struct ConvergencePoint {
  int index = 0;           // completion order among usable records, 1-based
  std::uint64_t id = 0;
  double objective = 0.0;  // negative validation NLL (maximized)
  double moving_average = 0.0;
};

std::vector<ConvergencePoint> convergence_series(const search::Catalog& catalog, int window = 25);

// Usable records sorted by ascending validation NLL.
std::vector<search::CatalogRecord> model_spectrum(const search::Catalog& catalog);

// Completion index at which the population first filled (count of usable
// records reaching P), or 0 when it never did.
int population_fill_index(const search::Catalog& catalog, int population_size);

}  // namespace euq::report

#endif  // EUQ_REPORT_REPORT_HPP_
