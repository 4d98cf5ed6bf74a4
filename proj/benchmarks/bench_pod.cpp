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

#include "euq/pod/pod.hpp"
#include "euq/rng.hpp"

namespace {

Eigen::MatrixXd random_snapshots(int n, int t) {
  euq::Rng rng(7);
  Eigen::MatrixXd m(n, t);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = rng.uniform(-1.0, 1.0);
  return m;
}

void BM_FitPod(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Eigen::MatrixXd snaps = random_snapshots(n, 128);
  for (auto _ : state) {
    benchmark::DoNotOptimize(euq::pod::fit_pod(snaps, 32));
  }
}
BENCHMARK(BM_FitPod)->Arg(1024)->Arg(8192)->Unit(benchmark::kMillisecond);

void BM_Reconstruct(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Eigen::MatrixXd snaps = random_snapshots(n, 64);
  const auto basis = euq::pod::fit_pod(snaps, 32);
  const Eigen::VectorXd coeffs = euq::pod::project(basis, snaps.col(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(euq::pod::reconstruct(basis, coeffs));
  }
}
BENCHMARK(BM_Reconstruct)->Arg(8192)->Arg(65536);

}  // namespace
