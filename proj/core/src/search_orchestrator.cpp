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

#include "euq/search/orchestrator.hpp"

#include <chrono>
#include <cmath>
#include <memory>
#include <thread>
#include <unordered_map>

#include "euq/errors.hpp"

namespace euq::search {

namespace {

double unix_seconds() {
  return std::chrono::duration<double>(std::chrono::system_clock::now().time_since_epoch())
      .count();
}

}  // namespace

void validate(const SearchConfig& cfg) {
  if (cfg.population_size < 1) throw ValidationError("population size must be positive");
  if (cfg.tournament_size < 1 || cfg.tournament_size > cfg.population_size) {
    throw ValidationError("tournament size must lie in [1, P]");
  }
  if (cfg.workers < 1) throw ValidationError("worker count must be positive");
  if (cfg.max_evaluations == 0 && cfg.max_seconds <= 0.0) {
    throw ValidationError("a stopping criterion is required (max evaluations or seconds)");
  }
}

Population::Population(int capacity) : capacity_(capacity) {
  if (capacity < 1) throw ValidationError("population capacity must be positive");
}

void Population::push(const CatalogRecord& record) {
  members_.push_back(record);
  if (static_cast<int>(members_.size()) > capacity_) members_.pop_front();
}

const CatalogRecord& select_parent(const Population& population, int tournament_size, Rng& rng) {
  if (!population.full()) {
    throw std::logic_error("select_parent requires a full population");
  }
  if (tournament_size < 1 || tournament_size > population.capacity()) {
    throw ValidationError("tournament size out of range");
  }
  const auto idx = rng.sample_without_replacement(population.size(),
                                                  static_cast<std::size_t>(tournament_size));
  const auto& members = population.members();
  std::size_t best = idx[0];
  for (std::size_t i = 1; i < idx.size(); ++i) {
    const std::size_t cand = idx[i];
    const double a = members[cand].valid_nll;
    const double b = members[best].valid_nll;
    // Deque order is completion order, so a larger index is more recent.
    if (a < b || (a == b && cand > best)) best = cand;
  }
  return members[best];
}

Catalog run_search(const arch::SearchSpace& space, const hpo::HyperSpace& hyperspace,
                   const Evaluator& evaluator, const SearchConfig& cfg,
                   const SearchHooks& hooks) {
  validate(cfg);
  validate(hyperspace);

  Rng arch_rng(derive_seed(cfg.seed, 1));
  Rng tournament_rng(derive_seed(cfg.seed, 2));
  Rng bo_rng(derive_seed(cfg.seed, 3));
  Rng seed_rng(derive_seed(cfg.seed, 4));

  hpo::BoOptimizer bo(hyperspace, cfg.bo);
  Population population(cfg.population_size);
  Catalog catalog;
  std::unordered_map<std::uint64_t, EvalRequest> in_flight;

  std::unique_ptr<Executor> executor;
  if (cfg.workers == 1) {
    executor = std::make_unique<SerialExecutor>(evaluator);
  } else {
    executor = std::make_unique<WorkerPool>(evaluator, cfg.workers);
  }

  const auto t_start = std::chrono::steady_clock::now();
  const auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  };
  std::uint64_t next_id = 1;
  std::uint64_t submitted = 0;
  const auto budget_allows = [&](std::uint64_t extra) {
    if (cfg.max_evaluations > 0 && submitted + extra > cfg.max_evaluations) return false;
    if (cfg.max_seconds > 0.0 && elapsed() >= cfg.max_seconds) return false;
    return true;
  };
  const auto submit_child = [&](const arch::ArchConfig& arch_cfg, const hpo::HyperConfig& hyper) {
    EvalRequest request{next_id++, arch_cfg, hyper, seed_rng.next_u64()};
    if (hooks.on_submit) hooks.on_submit(request, population);
    in_flight.emplace(request.id, request);
    executor->submit(request);
    ++submitted;
  };

  // Initialization: W random architecture/hyperparameter pairs.
  for (int i = 0; i < cfg.workers && budget_allows(1); ++i) {
    submit_child(arch::random_sample(space, arch_rng), hpo::random_sample(hyperspace, bo_rng));
  }

  while (!in_flight.empty()) {
    const std::vector<EvalResult> results = executor->check_finished();
    if (results.empty()) {
      if (cfg.workers > 1) std::this_thread::sleep_for(std::chrono::microseconds(200));
      continue;
    }

    for (const EvalResult& r : results) {
      const auto it = in_flight.find(r.id);
      if (it == in_flight.end()) throw std::logic_error("result for unknown evaluation id");
      const EvalRequest& request = it->second;

      CatalogRecord record;
      record.id = r.id;
      record.arch = request.arch;
      record.hyper = request.hyper;
      record.train_seed = request.train_seed;
      record.checkpoint = r.checkpoint;
      record.valid_nll = r.valid_nll;
      record.diverged = r.diverged;
      record.failed = r.failed;
      record.error = r.error;
      record.train_seconds = cfg.deterministic() ? 0.0 : r.train_seconds;
      record.completed_at =
          cfg.deterministic() ? static_cast<double>(catalog.size() + 1) : unix_seconds();
      in_flight.erase(it);

      if (record.usable() && std::isfinite(record.valid_nll)) {
        population.push(record);
        bo.tell(record.hyper, -record.valid_nll);
      }
      catalog.push_back(std::move(record));
      if (hooks.on_complete) hooks.on_complete(catalog.back());
    }

    // Refill every finished slot while the budget lasts; hyperparameters from
    // the BO, architectures by mutation once the population is full.
    std::size_t n_children = 0;
    while (n_children < results.size() && budget_allows(n_children + 1)) ++n_children;
    if (n_children == 0) continue;
    const std::vector<hpo::HyperConfig> hypers = bo.ask(static_cast<int>(n_children), bo_rng);
    for (const hpo::HyperConfig& hyper : hypers) {
      arch::ArchConfig child =
          population.full()
              ? arch::mutate(select_parent(population, cfg.tournament_size, tournament_rng).arch,
                             space, arch_rng)
              : arch::random_sample(space, arch_rng);
      submit_child(child, hyper);
    }
  }

  return catalog;
}

}  // namespace euq::search
