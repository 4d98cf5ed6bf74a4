#include <doctest.h>

#include <map>
#include <set>

#include "euq/arch/space.hpp"
#include "euq/errors.hpp"

using namespace euq::arch;
using euq::Rng;

namespace {

SearchSpace dense5() { return SearchSpace::dense_default(5, 4, 2); }
SearchSpace recurrent5() { return SearchSpace::recurrent_default(5, 4, 2); }

// The pair rule, counted independently: for consecutive nodes (k, k+1) the
// sources k-3..k-1 survive only when nonnegative.
int expected_skip_slots(int n_nodes) {
  int count = 0;
  for (int k = 1; k < n_nodes; ++k) {
    for (int src = k - 3; src <= k - 1; ++src) count += src >= 0;
  }
  return count;
}

}  // namespace

TEST_CASE("skip-slot enumeration follows the pair rule") {
  const SearchSpace d5 = dense5();
  CHECK(static_cast<int>(d5.skip_slots().size()) == expected_skip_slots(5));
  CHECK(expected_skip_slots(5) == 9);
  const SearchSpace d3 = SearchSpace::dense_default(3, 2, 1);
  CHECK(static_cast<int>(d3.skip_slots().size()) == expected_skip_slots(3));
  for (const SkipSlot& s : d5.skip_slots()) {
    CHECK(s.src_node >= 0);
    CHECK(s.src_node <= s.dst_node - 2);
  }
}

TEST_CASE("default space cardinalities match hand-computed products") {
  // dense: (1 + 5 widths x 2 activations)^5 nodes * 2^9 skips
  CHECK(dense5().cardinality() == doctest::Approx(82458112.0));
  // recurrent: (1 + 5 hidden sizes)^5 * 2^9
  CHECK(recurrent5().cardinality() == doctest::Approx(3981312.0));
}

TEST_CASE("a single-option variable list is rejected at construction") {
  CHECK_THROWS_AS(SearchSpace(TaskKind::kDense, 2, {VariableOption::identity()}, 2, 1),
                  euq::ValidationError);
}

TEST_CASE("random sampling is uniform per decision variable") {
  SearchSpace space(TaskKind::kDense, 1,
                    {VariableOption::identity(),
                     VariableOption::of(euq::nn::LayerSpec::dense(16, euq::nn::Activation::kRelu))},
                    2, 1);
  Rng rng(12);
  int ones = 0;
  const int n = 10000;
  for (int i = 0; i < n; ++i) ones += random_sample(space, rng).choices[0] == 1;
  CHECK(std::abs(ones / static_cast<double>(n) - 0.5) < 0.05);
}

TEST_CASE("sampling reproduces under a fixed seed and always decodes") {
  for (const SearchSpace& space : {dense5(), recurrent5()}) {
    Rng a(33), b(33);
    CHECK(random_sample(space, a) == random_sample(space, b));
    Rng rng(900);
    for (int i = 0; i < 500; ++i) {
      const ArchConfig cfg = random_sample(space, rng);
      const euq::nn::NetworkSpec spec = decode(space, cfg);  // validates acyclicity
      CHECK(spec.input_dim == space.input_dim());
      CHECK(spec.output_dim == space.output_dim());
    }
  }
}

TEST_CASE("mutation changes exactly one variable to a different value") {
  const SearchSpace space = dense5();
  Rng rng(71);
  for (int i = 0; i < 10000; ++i) {
    const ArchConfig parent = random_sample(space, rng);
    const ArchConfig child = mutate(parent, space, rng);
    CHECK(hamming_distance(parent, child) == 1);
    for (int v = 0; v < space.n_variables(); ++v) {
      if (parent.choices[v] != child.choices[v]) {
        CHECK(child.choices[v] >= 0);
        CHECK(child.choices[v] < space.option_count(v));
        // Reversible: the parent's value remains a valid distinct option, so a
        // later mutation can restore it.
        CHECK(parent.choices[v] != child.choices[v]);
        CHECK(parent.choices[v] < space.option_count(v));
      }
    }
  }
}

TEST_CASE("mutating a binary skip node flips it") {
  const SearchSpace space = dense5();
  Rng rng(5);
  int flips_seen = 0;
  for (int i = 0; i < 2000 && flips_seen < 50; ++i) {
    const ArchConfig parent = random_sample(space, rng);
    const ArchConfig child = mutate(parent, space, rng);
    for (int v = space.n_nodes(); v < space.n_variables(); ++v) {
      if (parent.choices[v] != child.choices[v]) {
        CHECK(child.choices[v] == 1 - parent.choices[v]);
        ++flips_seen;
      }
    }
  }
  CHECK(flips_seen >= 50);
}

TEST_CASE("the all-identity configuration decodes to input -> head") {
  const SearchSpace space = dense5();
  ArchConfig cfg;
  cfg.choices.assign(static_cast<std::size_t>(space.n_variables()), 0);
  const auto spec = decode(space, cfg);
  CHECK(spec.layers.empty());
  CHECK(spec.skips.empty());
}

TEST_CASE("with no identities every enabled skip node becomes an edge") {
  const SearchSpace space = dense5();
  ArchConfig cfg;
  cfg.choices.assign(static_cast<std::size_t>(space.n_variables()), 1);  // all real layers, all skips on
  const auto spec = decode(space, cfg);
  CHECK(spec.layers.size() == 5);
  CHECK(static_cast<int>(spec.skips.size()) == expected_skip_slots(5));
}

TEST_CASE("identity nodes re-route skip endpoints to earlier survivors") {
  const SearchSpace space = dense5();
  ArchConfig cfg;
  cfg.choices.assign(static_cast<std::size_t>(space.n_variables()), 1);
  cfg.choices[2] = 0;  // node 3 is identity
  const auto spec = decode(space, cfg);
  CHECK(spec.layers.size() == 4);
  for (const auto& e : spec.skips) {
    CHECK(e.src < e.dst);
    CHECK(e.dst <= 4);
  }
  // Slot 2 -> 4 still exists untouched; slots touching node 3 re-route or drop.
  std::set<std::pair<int, int>> edges;
  for (const auto& e : spec.skips) edges.insert({e.src, e.dst});
  CHECK(edges.size() == spec.skips.size());  // deduplicated
}

TEST_CASE("decoding distinguishes configurations that differ in an active node") {
  const SearchSpace space = dense5();
  ArchConfig a;
  a.choices.assign(static_cast<std::size_t>(space.n_variables()), 1);
  ArchConfig b = a;
  b.choices[0] = 2;  // different width/activation option on node 1
  CHECK_FALSE(decode(space, a) == decode(space, b));
}

TEST_CASE("malformed configurations are rejected") {
  const SearchSpace space = dense5();
  ArchConfig cfg;
  cfg.choices.assign(3, 0);
  CHECK_THROWS_AS(validate(space, cfg), euq::ValidationError);
  cfg.choices.assign(static_cast<std::size_t>(space.n_variables()), 0);
  cfg.choices[0] = 11;
  CHECK_THROWS_AS(validate(space, cfg), euq::ValidationError);
  cfg.choices[0] = 0;
  cfg.choices[space.n_variables() - 1] = 2;
  CHECK_THROWS_AS(validate(space, cfg), euq::ValidationError);
}
