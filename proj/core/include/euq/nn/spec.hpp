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

#ifndef EUQ_NN_SPEC_HPP_
#define EUQ_NN_SPEC_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "euq/nn/activation.hpp"

namespace euq::nn {

enum class LayerKind { kDense, kRecurrentCell, kIdentity };

std::string to_string(LayerKind k);

struct LayerSpec {
  LayerKind kind = LayerKind::kDense;
  int width = 0;  // ignored for identity layers
  Activation activation = Activation::kRelu;

  static LayerSpec dense(int width, Activation act) { return {LayerKind::kDense, width, act}; }
  static LayerSpec recurrent(int width) { return {LayerKind::kRecurrentCell, width, Activation::kTanh}; }
  static LayerSpec identity() { return {LayerKind::kIdentity, 0, Activation::kLinear}; }

  bool operator==(const LayerSpec&) const = default;
};

// Skip edges reference graph nodes: node 0 is the network input, node i is the
// output of layers[i-1]. An edge (src, dst) adds node src's value into the
// combined input of layer dst.
struct SkipEdge {
  int src = 0;
  int dst = 0;
  bool operator==(const SkipEdge&) const = default;
};

// Decoded architecture: a chain of layers plus forward-only skip edges, with a
// Gaussian head (mean and variance per output) always appended after the last
// node. Recurrent layers consume the full input sequence; the head reads the
// final step of the last node.
struct NetworkSpec {
  std::vector<LayerSpec> layers;
  std::vector<SkipEdge> skips;
  int input_dim = 0;
  int output_dim = 0;

  bool operator==(const NetworkSpec&) const = default;
};

// Throws ValidationError on cycles (src >= dst), non-positive widths of
// non-identity layers, out-of-range edge endpoints, or bad dimensions.
void validate(const NetworkSpec& spec);

// Width of each graph node (0 = input); identity layers pass their
// predecessor's width through.
std::vector<int> node_widths(const NetworkSpec& spec);

// Flat-parameter layout. Blocks are enumerated in a fixed order: for each
// layer its matrices then bias (recurrent: input matrix, recurrent matrix,
// bias), then skip projections sorted by (dst, src), then the head matrix and
// bias. Skip edges with equal source and combined-input widths carry no
// parameters (identity projection).
struct ParamBlock {
  enum class Role { kDenseW, kDenseB, kLstmWx, kLstmWh, kLstmB, kSkipProj, kHeadW, kHeadB };
  Role role;
  int layer = -1;        // owning layer (1-based node index), -1 for head
  int skip_src = -1;     // for kSkipProj
  std::size_t offset = 0;
  int rows = 0;
  int cols = 0;
  std::size_t size() const { return static_cast<std::size_t>(rows) * cols; }
};

struct ParamLayout {
  std::vector<ParamBlock> blocks;
  std::size_t total = 0;
};

ParamLayout build_layout(const NetworkSpec& spec);

// Total trainable parameter count implied by the spec.
std::size_t parameter_count(const NetworkSpec& spec);

// FNV-1a over a canonical text form; stored in checkpoint headers so a weight
// file cannot be loaded against a different architecture.
std::uint64_t spec_hash(const NetworkSpec& spec);

std::string to_string(const NetworkSpec& spec);

}  // namespace euq::nn

#endif  // EUQ_NN_SPEC_HPP_
