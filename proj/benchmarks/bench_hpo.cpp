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

#include "euq/hpo/bo.hpp"

namespace {

void BM_BoAsk(benchmark::State& state) {
  const int n_obs = static_cast<int>(state.range(0));
  const euq::hpo::HyperSpace space;
  euq::Rng rng(3);
  euq::hpo::BoOptimizer bo(space);
  for (int i = 0; i < n_obs; ++i) {
    bo.tell(euq::hpo::random_sample(space, rng), rng.uniform(-1.0, 1.0));
  }
  for (auto _ : state) {
    euq::hpo::BoOptimizer copy = bo;
    benchmark::DoNotOptimize(copy.ask(4, rng));
  }
}
BENCHMARK(BM_BoAsk)->Arg(16)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_GpPredict(benchmark::State& state) {
  const int n_obs = static_cast<int>(state.range(0));
  euq::Rng rng(5);
  Eigen::MatrixXd X(n_obs, 6);
  Eigen::VectorXd y(n_obs);
  for (int i = 0; i < n_obs; ++i) {
    for (int d = 0; d < 6; ++d) X(i, d) = rng.uniform01();
    y(i) = rng.uniform(-1.0, 1.0);
  }
  euq::hpo::GaussianProcess gp;
  gp.fit(X, y);
  Eigen::VectorXd q(6);
  for (int d = 0; d < 6; ++d) q(d) = rng.uniform01();
  for (auto _ : state) {
    benchmark::DoNotOptimize(gp.predict(q));
  }
}
BENCHMARK(BM_GpPredict)->Arg(64)->Arg(512);

}  // namespace
