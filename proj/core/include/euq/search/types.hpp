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

#ifndef EUQ_SEARCH_TYPES_HPP_
#define EUQ_SEARCH_TYPES_HPP_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "euq/arch/space.hpp"
#include "euq/hpo/space.hpp"

namespace euq::search {

// A model configuration handed to a worker for training.
struct EvalRequest {
  std::uint64_t id = 0;
  arch::ArchConfig arch;
  hpo::HyperConfig hyper;
  std::uint64_t train_seed = 0;
};

// What a worker reports back. `failed` marks crashes/invalid runs; `diverged`
// marks trainings aborted on non-finite losses (checkpoint still valid).
struct EvalResult {
  std::uint64_t id = 0;
  double valid_nll = 0.0;
  std::string checkpoint;  // path relative to the run directory, may be empty
  double train_seconds = 0.0;
  bool diverged = false;
  bool failed = false;
  std::string error;
};

using Evaluator = std::function<EvalResult(const EvalRequest&)>;

// One finished evaluation as persisted in the catalog.
struct CatalogRecord {
  std::uint64_t id = 0;
  arch::ArchConfig arch;
  hpo::HyperConfig hyper;
  std::string checkpoint;
  double valid_nll = 0.0;
  double train_seconds = 0.0;
  double completed_at = 0.0;  // unix seconds, or the completion index in deterministic runs
  std::uint64_t train_seed = 0;
  bool diverged = false;
  bool failed = false;
  std::string error;

  bool usable() const { return !failed && !diverged; }
};

using Catalog = std::vector<CatalogRecord>;

// Line-delimited JSON, one record per line, keys in lexicographic order.
void save_catalog(const std::filesystem::path& path, const Catalog& catalog);
Catalog load_catalog(const std::filesystem::path& path);

}  // namespace euq::search

#endif  // EUQ_SEARCH_TYPES_HPP_
