// Copyright 2026 The dsgdlab Authors.
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

#include "dsgdlab/topology.hpp"

namespace {

using namespace dsgdlab;

void BM_SpectralRing(benchmark::State& state) {
  const MixingMatrix w =
      metropolis_weights(build_ring(static_cast<std::size_t>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(spectral_info(w));
}
BENCHMARK(BM_SpectralRing)->Arg(16)->Arg(50)->Arg(100)->Unit(benchmark::kMicrosecond);

void BM_SpectralErdosRenyi(benchmark::State& state) {
  const MixingMatrix w = lazy_metropolis_weights(
      build_erdos_renyi(static_cast<std::size_t>(state.range(0)), 0.2, 5));
  for (auto _ : state) benchmark::DoNotOptimize(spectral_info(w));
}
BENCHMARK(BM_SpectralErdosRenyi)->Arg(30)->Arg(100)->Unit(benchmark::kMicrosecond);

void BM_MetropolisWeights(benchmark::State& state) {
  const Graph g = build_grid(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(metropolis_weights(g));
}
BENCHMARK(BM_MetropolisWeights)->Arg(5)->Arg(10);

}  // namespace
