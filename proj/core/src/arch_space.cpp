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

#include "euq/arch/space.hpp"

#include <algorithm>

#include "euq/errors.hpp"

namespace euq::arch {

SearchSpace::SearchSpace(TaskKind task, int n_nodes, std::vector<VariableOption> node_options,
                         int input_dim, int output_dim)
    : task_(task), n_nodes_(n_nodes), node_options_(std::move(node_options)),
      input_dim_(input_dim), output_dim_(output_dim) {
  if (n_nodes_ < 1) throw ValidationError("search space needs at least one variable node");
  if (node_options_.size() < 2) {
    throw ValidationError("every decision variable needs at least two options");
  }
  if (input_dim_ <= 0 || output_dim_ <= 0) throw ValidationError("bad search-space dimensions");
  // Skip slots for the consecutive pair (k, k+1): sources k-3, k-2, k-1,
  // clipped at the input node (index 0).
  for (int k = 1; k < n_nodes_; ++k) {
    const int dst = k + 1;
    for (int src = k - 3; src <= k - 1; ++src) {
      if (src >= 0) skip_slots_.push_back({src, dst});
    }
  }
  std::sort(skip_slots_.begin(), skip_slots_.end(), [](const SkipSlot& a, const SkipSlot& b) {
    return a.dst_node != b.dst_node ? a.dst_node < b.dst_node : a.src_node < b.src_node;
  });
}

SearchSpace SearchSpace::with_widths(TaskKind task, int n_nodes, const std::vector<int>& widths,
                                     const std::vector<nn::Activation>& activations,
                                     int input_dim, int output_dim) {
  std::vector<VariableOption> options;
  options.push_back(VariableOption::identity());
  if (task == TaskKind::kDense) {
    for (int w : widths)
      for (nn::Activation a : activations) options.push_back(VariableOption::of(nn::LayerSpec::dense(w, a)));
  } else {
    for (int w : widths) options.push_back(VariableOption::of(nn::LayerSpec::recurrent(w)));
  }
  return SearchSpace(task, n_nodes, std::move(options), input_dim, output_dim);
}

SearchSpace SearchSpace::dense_default(int n_nodes, int input_dim, int output_dim) {
  return with_widths(TaskKind::kDense, n_nodes, {16, 32, 64, 128, 256},
                     {nn::Activation::kRelu, nn::Activation::kTanh}, input_dim, output_dim);
}

SearchSpace SearchSpace::recurrent_default(int n_nodes, int input_dim, int output_dim) {
  return with_widths(TaskKind::kRecurrent, n_nodes, {16, 32, 64, 128, 256}, {}, input_dim,
                     output_dim);
}

int SearchSpace::option_count(int variable) const {
  if (variable < 0 || variable >= n_variables()) throw ValidationError("variable index out of range");
  return variable < n_nodes_ ? static_cast<int>(node_options_.size()) : 2;
}

double SearchSpace::cardinality() const {
  double card = 1.0;
  for (int v = 0; v < n_variables(); ++v) card *= option_count(v);
  return card;
}

void validate(const SearchSpace& space, const ArchConfig& cfg) {
  if (static_cast<int>(cfg.choices.size()) != space.n_variables()) {
    throw ValidationError("arch config has wrong variable count");
  }
  for (int v = 0; v < space.n_variables(); ++v) {
    if (cfg.choices[v] < 0 || cfg.choices[v] >= space.option_count(v)) {
      throw ValidationError("arch choice out of range at variable " + std::to_string(v));
    }
  }
}

ArchConfig random_sample(const SearchSpace& space, Rng& rng) {
  ArchConfig cfg;
  cfg.choices.resize(space.n_variables());
  for (int v = 0; v < space.n_variables(); ++v) {
    cfg.choices[v] = rng.uniform_int(0, space.option_count(v) - 1);
  }
  return cfg;
}

ArchConfig mutate(const ArchConfig& parent, const SearchSpace& space, Rng& rng) {
  validate(space, parent);
  ArchConfig child = parent;
  const int v = rng.uniform_int(0, space.n_variables() - 1);
  const int n_options = space.option_count(v);
  int pick = rng.uniform_int(0, n_options - 2);
  if (pick >= parent.choices[v]) ++pick;  // exclude the current value
  child.choices[v] = pick;
  return child;
}

nn::NetworkSpec decode(const SearchSpace& space, const ArchConfig& cfg) {
  validate(space, cfg);
  const int n = space.n_nodes();

  // survivor[j]: node j maps to itself unless removed; node 0 always survives.
  std::vector<bool> alive(n + 1, true);
  for (int j = 1; j <= n; ++j) {
    alive[j] = !space.node_options()[cfg.choices[j - 1]].is_identity;
  }
  // Compacted index of each surviving node, and nearest surviving node at or
  // before every index.
  std::vector<int> compact(n + 1, -1);
  std::vector<int> nearest_alive(n + 1, 0);
  int next_index = 0;
  for (int j = 0; j <= n; ++j) {
    if (alive[j]) {
      compact[j] = next_index++;
      nearest_alive[j] = j;
    } else {
      nearest_alive[j] = nearest_alive[j - 1];
    }
  }

  nn::NetworkSpec spec;
  spec.input_dim = space.input_dim();
  spec.output_dim = space.output_dim();
  for (int j = 1; j <= n; ++j) {
    if (alive[j]) spec.layers.push_back(space.node_options()[cfg.choices[j - 1]].layer);
  }

  const auto& slots = space.skip_slots();
  for (std::size_t s = 0; s < slots.size(); ++s) {
    if (cfg.choices[n + static_cast<int>(s)] != 1) continue;
    const int src = nearest_alive[slots[s].src_node];
    const int dst = nearest_alive[slots[s].dst_node];
    if (dst == 0 || src >= dst) continue;  // edge collapsed onto the chain
    const nn::SkipEdge edge{compact[src], compact[dst]};
    if (std::find(spec.skips.begin(), spec.skips.end(), edge) == spec.skips.end()) {
      spec.skips.push_back(edge);
    }
  }
  nn::validate(spec);
  return spec;
}

int hamming_distance(const ArchConfig& a, const ArchConfig& b) {
  if (a.choices.size() != b.choices.size()) throw ValidationError("config length mismatch");
  int d = 0;
  for (std::size_t i = 0; i < a.choices.size(); ++i) d += a.choices[i] != b.choices[i];
  return d;
}

}  // namespace euq::arch
