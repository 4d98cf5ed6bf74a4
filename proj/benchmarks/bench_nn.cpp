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

#include <benchmark/benchmark.h>

#include "euq/nn/network.hpp"
#include "euq/rng.hpp"

namespace {

using namespace euq::nn;

NetworkSpec lstm_spec(int width, int input_dim, int output_dim) {
  NetworkSpec spec;
  spec.input_dim = input_dim;
  spec.output_dim = output_dim;
  for (int i = 0; i < 5; ++i) spec.layers.push_back(LayerSpec::recurrent(width));
  spec.skips = {{0, 2}, {1, 3}, {2, 5}};
  return spec;
}

NetworkSpec dense_spec(int width, int input_dim, int output_dim) {
  NetworkSpec spec;
  spec.input_dim = input_dim;
  spec.output_dim = output_dim;
  for (int i = 0; i < 5; ++i) spec.layers.push_back(LayerSpec::dense(width, Activation::kRelu));
  spec.skips = {{0, 2}, {1, 3}, {2, 5}};
  return spec;
}

std::vector<Sequence> make_batch(int n, int dim, int steps, euq::Rng& rng) {
  std::vector<Sequence> xs;
  for (int i = 0; i < n; ++i) {
    Sequence x(dim, steps);
    for (Eigen::Index c = 0; c < x.size(); ++c) x.data()[c] = rng.uniform(-1.0, 1.0);
    xs.push_back(std::move(x));
  }
  return xs;
}

void BM_ForwardLstm(benchmark::State& state) {
  const int width = static_cast<int>(state.range(0));
  const Network net = build_network(lstm_spec(width, 8, 64), 1);
  euq::Rng rng(2);
  const auto xs = make_batch(32, 8, 9, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(forward_gaussian(net, xs));
  }
  state.SetItemsProcessed(state.iterations() * 32);
}
BENCHMARK(BM_ForwardLstm)->Arg(16)->Arg(64)->Arg(128);

void BM_GradLstm(benchmark::State& state) {
  const int width = static_cast<int>(state.range(0));
  const Network net = build_network(lstm_spec(width, 8, 64), 1);
  euq::Rng rng(2);
  const auto xs = make_batch(32, 8, 9, rng);
  Eigen::MatrixXd ys(64, 32);
  for (Eigen::Index i = 0; i < ys.size(); ++i) ys.data()[i] = rng.uniform(-1.0, 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(grad(net, xs, ys));
  }
  state.SetItemsProcessed(state.iterations() * 32);
}
BENCHMARK(BM_GradLstm)->Arg(16)->Arg(64);

void BM_GradDense(benchmark::State& state) {
  const int width = static_cast<int>(state.range(0));
  const Network net = build_network(dense_spec(width, 50, 256), 1);
  euq::Rng rng(2);
  const auto xs = make_batch(64, 50, 1, rng);
  Eigen::MatrixXd ys(256, 64);
  for (Eigen::Index i = 0; i < ys.size(); ++i) ys.data()[i] = rng.uniform(-1.0, 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(grad(net, xs, ys));
  }
  state.SetItemsProcessed(state.iterations() * 64);
}
BENCHMARK(BM_GradDense)->Arg(64)->Arg(256);

}  // namespace

BENCHMARK_MAIN();
