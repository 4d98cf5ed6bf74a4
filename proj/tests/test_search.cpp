#include <doctest.h>

#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include "euq/arch/space.hpp"
#include "euq/errors.hpp"
#include "euq/search/executor.hpp"
#include "euq/search/orchestrator.hpp"
#include "test_helpers.hpp"

using namespace euq::search;
using euq::Rng;

namespace {

// Deterministic synthetic score derived from the request id.
Evaluator stub_evaluator(int sleep_ms = 0, int fail_every = 0) {
  return [sleep_ms, fail_every](const EvalRequest& req) -> EvalResult {
    if (sleep_ms > 0) std::this_thread::sleep_for(std::chrono::milliseconds(sleep_ms));
    if (fail_every > 0 && req.id % fail_every == 0) {
      throw std::runtime_error("injected failure");
    }
    EvalResult r;
    r.id = req.id;
    r.valid_nll = std::sin(static_cast<double>(req.train_seed % 10007)) + 1.5;
    r.checkpoint = "";
    return r;
  };
}

SearchConfig small_search(int workers, std::uint64_t evals) {
  SearchConfig cfg;
  cfg.population_size = 8;
  cfg.tournament_size = 4;
  cfg.workers = workers;
  cfg.max_evaluations = evals;
  cfg.seed = 99;
  return cfg;
}

euq::arch::SearchSpace tiny_space() { return euq::arch::SearchSpace::dense_default(3, 2, 1); }

CatalogRecord record_with(std::uint64_t id, double nll) {
  CatalogRecord r;
  r.id = id;
  r.valid_nll = nll;
  return r;
}

}  // namespace

TEST_CASE("worker pool delivers every ticket exactly once") {
  WorkerPool pool(stub_evaluator(2), 3);
  CHECK(pool.check_finished().empty());  // idle check returns immediately

  const int n = 12;
  for (int i = 1; i <= n; ++i) {
    EvalRequest req;
    req.id = static_cast<std::uint64_t>(i);
    req.train_seed = static_cast<std::uint64_t>(i);
    pool.submit(req);
  }
  std::set<std::uint64_t> seen;
  const auto deadline = std::chrono::steady_clock::now() + std::chrono::seconds(10);
  while (seen.size() < static_cast<std::size_t>(n) && std::chrono::steady_clock::now() < deadline) {
    for (const auto& r : pool.check_finished()) {
      CHECK(seen.insert(r.id).second);  // no duplicates
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(1));
  }
  CHECK(seen.size() == n);
  for (std::uint64_t i = 1; i <= n; ++i) CHECK(seen.count(i) == 1);
  pool.shutdown();
  CHECK_THROWS_AS(pool.submit(EvalRequest{}), euq::ValidationError);
}

TEST_CASE("worker exceptions surface as failed results") {
  SerialExecutor ex(stub_evaluator(0, 1));  // every job fails
  EvalRequest req;
  req.id = 7;
  ex.submit(req);
  const auto results = ex.check_finished();
  REQUIRE(results.size() == 1);
  CHECK(results[0].failed);
  CHECK(results[0].id == 7);
  CHECK(results[0].error == "injected failure");
}

TEST_CASE("throughput scales with workers on sleepy jobs") {
  const int jobs = 12, ms = 30;
  const auto run = [&](int workers) {
    WorkerPool pool(stub_evaluator(ms), workers);
    for (int i = 1; i <= jobs; ++i) {
      EvalRequest r;
      r.id = static_cast<std::uint64_t>(i);
      pool.submit(r);
    }
    const auto t0 = std::chrono::steady_clock::now();
    std::size_t done = 0;
    while (done < jobs) {
      done += pool.check_finished().size();
      std::this_thread::sleep_for(std::chrono::microseconds(200));
    }
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  };
  const double parallel = run(4);
  CHECK(parallel < 0.75 * jobs * ms / 1000.0);
}

TEST_CASE("serial search produces ids 1..N in order") {
  const auto space = tiny_space();
  const euq::hpo::HyperSpace hyper;
  const Catalog catalog = run_search(space, hyper, stub_evaluator(), small_search(1, 5));
  REQUIRE(catalog.size() == 5);
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(catalog[i].id == i + 1);
    CHECK(catalog[i].completed_at == doctest::Approx(static_cast<double>(i + 1)));
    CHECK(catalog[i].train_seconds == 0.0);
  }
}

TEST_CASE("seeded serial reruns serialize byte-identically") {
  const auto space = tiny_space();
  const euq::hpo::HyperSpace hyper;
  const Catalog a = run_search(space, hyper, stub_evaluator(), small_search(1, 12));
  const Catalog b = run_search(space, hyper, stub_evaluator(), small_search(1, 12));
  const auto dir = euq_test::temp_dir("catalog");
  save_catalog(dir / "a.jsonl", a);
  save_catalog(dir / "b.jsonl", b);
  std::ifstream fa(dir / "a.jsonl"), fb(dir / "b.jsonl");
  std::stringstream sa, sb;
  sa << fa.rdbuf();
  sb << fb.rdbuf();
  CHECK(sa.str() == sb.str());
  CHECK_FALSE(sa.str().empty());

  const Catalog reloaded = load_catalog(dir / "a.jsonl");
  REQUIRE(reloaded.size() == a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(reloaded[i].id == a[i].id);
    CHECK(reloaded[i].valid_nll == a[i].valid_nll);
    CHECK(reloaded[i].arch == a[i].arch);
    CHECK(reloaded[i].hyper == a[i].hyper);
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("population stays bounded and children are Hamming-1 after the fill") {
  const auto space = tiny_space();
  const euq::hpo::HyperSpace hyper;
  SearchConfig cfg = small_search(4, 60);

  // The hooks fire on the manager thread only, so plain state is safe.
  std::atomic<int> violations{0};
  std::vector<std::uint64_t> usable_completions;
  SearchHooks hooks;
  hooks.on_complete = [&](const CatalogRecord& r) {
    if (r.usable()) usable_completions.push_back(r.id);
  };
  hooks.on_submit = [&](const EvalRequest& req, const Population& pop) {
    if (static_cast<int>(pop.size()) > cfg.population_size) violations.fetch_add(1);
    // Aging: the members are exactly the last <= P usable completions, in
    // completion order.
    const std::size_t expect =
        std::min<std::size_t>(usable_completions.size(), static_cast<std::size_t>(cfg.population_size));
    if (pop.size() != expect) violations.fetch_add(1);
    for (std::size_t i = 0; i < pop.size(); ++i) {
      if (pop.members()[i].id != usable_completions[usable_completions.size() - expect + i]) {
        violations.fetch_add(1);
      }
    }
    if (pop.full()) {
      bool near = false;
      for (const auto& member : pop.members()) {
        if (euq::arch::hamming_distance(member.arch, req.arch) == 1) near = true;
      }
      if (!near) violations.fetch_add(1);
    }
  };
  const Catalog catalog = run_search(space, hyper, stub_evaluator(1), cfg, hooks);
  CHECK(catalog.size() == 60);
  CHECK(violations.load() == 0);

  std::set<std::uint64_t> ids;
  for (const auto& r : catalog) CHECK(ids.insert(r.id).second);
}

TEST_CASE("failed evaluations are excluded from population and BO but kept in the catalog") {
  const auto space = tiny_space();
  const euq::hpo::HyperSpace hyper;
  SearchConfig cfg = small_search(1, 12);

  std::size_t pop_pushes = 0;
  SearchHooks hooks;
  hooks.on_complete = [&](const CatalogRecord& r) { pop_pushes += r.usable(); };
  const Catalog catalog = run_search(space, hyper, stub_evaluator(0, 3), cfg, hooks);
  CHECK(catalog.size() == 12);
  std::size_t failed = 0;
  for (const auto& r : catalog) failed += r.failed;
  CHECK(failed == 4);  // ids 3, 6, 9, 12
  CHECK(pop_pushes == 8);
  for (const auto& r : catalog) {
    if (r.failed) CHECK(r.error == "injected failure");
  }
}

TEST_CASE("tournament selection follows best-of-S with recency tie-breaks") {
  Population pop(8);
  for (int i = 0; i < 8; ++i) pop.push(record_with(static_cast<std::uint64_t>(i + 1), 8.0 - i));
  // Best member is the most recent (id 8, nll 1.0).
  Rng rng(6);
  SUBCASE("full tournament always returns the global best") {
    for (int t = 0; t < 50; ++t) {
      CHECK(select_parent(pop, 8, rng).id == 8);
    }
  }
  SUBCASE("single-sample tournaments are uniform") {
    std::set<std::uint64_t> seen;
    for (int t = 0; t < 500; ++t) seen.insert(select_parent(pop, 1, rng).id);
    CHECK(seen.size() == 8);
  }
  SUBCASE("ties break toward the most recent member") {
    Population tied(4);
    for (int i = 0; i < 4; ++i) tied.push(record_with(static_cast<std::uint64_t>(i + 1), 1.0));
    for (int t = 0; t < 50; ++t) CHECK(select_parent(tied, 4, rng).id == 4);
  }
  SUBCASE("selection pressure grows with S") {
    Rng mc(123);
    const auto mean_fitness = [&](int s) {
      double sum = 0.0;
      for (int t = 0; t < 4000; ++t) sum += select_parent(pop, s, mc).valid_nll;
      return sum / 4000.0;
    };
    const double s1 = mean_fitness(1), s4 = mean_fitness(4), s8 = mean_fitness(8);
    CHECK(s4 < s1);
    CHECK(s8 < s4);
    CHECK(s8 == doctest::Approx(1.0));
  }
}

TEST_CASE("select_parent requires a full population") {
  Population pop(4);
  pop.push(record_with(1, 0.5));
  Rng rng(1);
  CHECK_THROWS_AS(select_parent(pop, 2, rng), std::logic_error);
}

TEST_CASE("population eviction removes exactly the oldest member") {
  Population pop(3);
  for (int i = 1; i <= 5; ++i) pop.push(record_with(static_cast<std::uint64_t>(i), i));
  REQUIRE(pop.size() == 3);
  CHECK(pop.members()[0].id == 3);
  CHECK(pop.members()[1].id == 4);
  CHECK(pop.members()[2].id == 5);
}

TEST_CASE("the wall-clock criterion stops submissions and drains in-flight work") {
  const auto space = tiny_space();
  const euq::hpo::HyperSpace hyper;
  SearchConfig cfg;
  cfg.population_size = 4;
  cfg.tournament_size = 2;
  cfg.workers = 2;
  cfg.max_evaluations = 0;  // wall clock only
  cfg.max_seconds = 0.25;
  cfg.seed = 3;
  const auto t0 = std::chrono::steady_clock::now();
  const Catalog catalog = run_search(space, hyper, stub_evaluator(20), cfg);
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  CHECK(catalog.size() >= 2);      // the initial W submissions complete
  CHECK(elapsed < 5.0);            // terminates promptly after the budget
  std::set<std::uint64_t> ids;
  for (const auto& r : catalog) CHECK(ids.insert(r.id).second);
}

TEST_CASE("search config validation") {
  SearchConfig cfg = small_search(1, 5);
  cfg.tournament_size = 9;
  CHECK_THROWS_AS(validate(cfg), euq::ValidationError);
  cfg = small_search(1, 0);
  CHECK_THROWS_AS(validate(cfg), euq::ValidationError);  // no stopping criterion
  cfg.max_seconds = 1.0;
  CHECK_NOTHROW(validate(cfg));
}
