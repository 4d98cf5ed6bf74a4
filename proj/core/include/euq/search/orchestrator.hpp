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

#ifndef EUQ_SEARCH_ORCHESTRATOR_HPP_
#define EUQ_SEARCH_ORCHESTRATOR_HPP_

#include <deque>
#include <functional>
#include <optional>

#include "euq/hpo/bo.hpp"
#include "euq/search/executor.hpp"
#include "euq/search/types.hpp"

namespace euq::search {

struct SearchConfig {
  int population_size = 32;   // P
  int tournament_size = 8;    // S, 1 <= S <= P
  int workers = 1;            // W
  std::uint64_t max_evaluations = 0;  // 0 = unbounded (wall clock must bound)
  double max_seconds = 0.0;           // 0 = unbounded
  std::uint64_t seed = 0;
  hpo::BoConfig bo;
  // With one worker the search runs serially and timing fields in the catalog
  // are replaced by the completion index, making reruns byte-identical.
  std::optional<bool> deterministic_timing;

  bool deterministic() const { return deterministic_timing.value_or(workers == 1); }
};

void validate(const SearchConfig& cfg);

// Bounded FIFO of the most recent usable evaluations; insertion past the
// capacity evicts exactly the oldest member.
class Population {
 public:
  explicit Population(int capacity);

  void push(const CatalogRecord& record);
  bool full() const { return static_cast<int>(members_.size()) == capacity_; }
  std::size_t size() const { return members_.size(); }
  int capacity() const { return capacity_; }
  const std::deque<CatalogRecord>& members() const { return members_; }

 private:
  int capacity_;
  std::deque<CatalogRecord> members_;
};

// Best-of-S tournament: S members sampled uniformly without replacement; the
// lowest validation NLL wins, ties resolved toward the most recent member.
// The population must be full.
const CatalogRecord& select_parent(const Population& population, int tournament_size, Rng& rng);

// Observation hooks for tests and reporting; both optional.
struct SearchHooks {
  std::function<void(const EvalRequest&, const Population&)> on_submit;
  std::function<void(const CatalogRecord&)> on_complete;
};

// The asynchronous aging-evolution + Bayesian-optimization loop: seeds W
// random configurations, then on every completion tells the BO the result,
// asks it for as many hyperparameter configurations, pairs each with a
// mutated tournament parent (or a random architecture while the population
// fills) and resubmits without blocking. Returns every completed evaluation
// in completion order.
Catalog run_search(const arch::SearchSpace& space, const hpo::HyperSpace& hyperspace,
                   const Evaluator& evaluator, const SearchConfig& cfg,
                   const SearchHooks& hooks = {});

}  // namespace euq::search

#endif  // EUQ_SEARCH_ORCHESTRATOR_HPP_
