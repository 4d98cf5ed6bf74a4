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

#ifndef EUQ_ARCH_SPACE_HPP_
#define EUQ_ARCH_SPACE_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "euq/nn/spec.hpp"
#include "euq/rng.hpp"

namespace euq::arch {

// One categorical choice for a variable node: a concrete layer or identity
// (which removes the node at decode time).
struct VariableOption {
  bool is_identity = false;
  nn::LayerSpec layer;

  static VariableOption identity() { return {true, {}}; }
  static VariableOption of(nn::LayerSpec l) { return {false, l}; }
};

// A binary decision variable: enable/disable the skip edge src_node -> dst_node
// (node 0 is the network input, nodes 1..n are variable nodes).
struct SkipSlot {
  int src_node = 0;
  int dst_node = 0;
};

enum class TaskKind { kDense, kRecurrent };

// DAG-encoded search space: n variable nodes, each with its option list, plus
// one binary skip node per in-range (dst, src) pair following the rule that a
// pair of consecutive nodes (k, k+1) contributes skip slots from nodes k-3,
// k-2, k-1 into node k+1, dropping sources before the input node.
// Decision-variable order: variable nodes first, then skip slots sorted by
// (dst, src).
class SearchSpace {
 public:
  SearchSpace(TaskKind task, int n_nodes, std::vector<VariableOption> node_options,
              int input_dim, int output_dim);

  // Default spaces: identity + widths {16,32,64,128,256} x {relu,tanh} for
  // dense, identity + hidden sizes {16,32,64,128,256} for recurrent.
  static SearchSpace dense_default(int n_nodes, int input_dim, int output_dim);
  static SearchSpace recurrent_default(int n_nodes, int input_dim, int output_dim);
  static SearchSpace with_widths(TaskKind task, int n_nodes,
                                 const std::vector<int>& widths,
                                 const std::vector<nn::Activation>& activations,
                                 int input_dim, int output_dim);

  TaskKind task() const { return task_; }
  int n_nodes() const { return n_nodes_; }
  int input_dim() const { return input_dim_; }
  int output_dim() const { return output_dim_; }
  const std::vector<VariableOption>& node_options() const { return node_options_; }
  const std::vector<SkipSlot>& skip_slots() const { return skip_slots_; }

  // Total decision variables: n_nodes + |skip slots|.
  int n_variables() const { return n_nodes_ + static_cast<int>(skip_slots_.size()); }
  int option_count(int variable) const;

  // Product of option counts over every decision variable.
  double cardinality() const;

 private:
  TaskKind task_;
  int n_nodes_;
  std::vector<VariableOption> node_options_;
  std::vector<SkipSlot> skip_slots_;
  int input_dim_;
  int output_dim_;
};

// One categorical choice index per decision variable.
struct ArchConfig {
  std::vector<int> choices;
  bool operator==(const ArchConfig&) const = default;
};

void validate(const SearchSpace& space, const ArchConfig& cfg);

// Uniform draw over every decision variable.
ArchConfig random_sample(const SearchSpace& space, Rng& rng);

// Re-draws exactly one uniformly chosen decision variable, excluding its
// current value; the child is always at Hamming distance one from the parent.
ArchConfig mutate(const ArchConfig& parent, const SearchSpace& space, Rng& rng);

// Materializes the configuration: identity choices remove their node, skip
// edges with vanished endpoints re-route to the nearest surviving earlier
// node, and edges that collapse (src >= dst or dst at the input) are dropped,
// as are duplicates.
nn::NetworkSpec decode(const SearchSpace& space, const ArchConfig& cfg);

int hamming_distance(const ArchConfig& a, const ArchConfig& b);

}  // namespace euq::arch

#endif  // EUQ_ARCH_SPACE_HPP_
