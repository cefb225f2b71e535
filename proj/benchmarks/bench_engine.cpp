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

#include <memory>

#include "dsgdlab/engine.hpp"
#include "dsgdlab/problems.hpp"
#include "dsgdlab/topology.hpp"

namespace {

using namespace dsgdlab;

void BM_RidgeSample(benchmark::State& state) {
  RidgeParams rp;
  rp.agents = 4;
  rp.p = static_cast<std::size_t>(state.range(0));
  const RidgeStreamProblem prob(rp);
  std::vector<double> x(rp.p, 0.3), g(rp.p);
  Rng rng(1);
  for (auto _ : state) {
    prob.sample_gradient(1, x, rng, g);
    benchmark::DoNotOptimize(g.data());
  }
}
BENCHMARK(BM_RidgeSample)->Arg(10)->Arg(100);

void BM_DsgdStep(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  RidgeParams rp;
  rp.agents = n;
  const RidgeStreamProblem prob(rp);
  const MixingMatrix w = metropolis_weights(build_ring(n));
  Matrix x(n, rp.p, 0.1), half(n, rp.p), out(n, rp.p);
  auto rngs = agent_streams(3, n);
  for (auto _ : state) {
    dsgd_step(x, w, prob, 1e-3, rngs, half, out);
    benchmark::DoNotOptimize(out.flat().data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_DsgdStep)->Arg(9)->Arg(25)->Arg(100);

void BM_SimulationRidgeRing(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  RidgeParams rp;
  rp.agents = n;
  SimulationConfig cfg;
  cfg.oracle = std::make_shared<RidgeStreamProblem>(rp);
  cfg.mixing = std::make_shared<MixingMatrix>(metropolis_weights(build_ring(n)));
  cfg.schedule = StepsizeSchedule::simple(20.0, 20.0);
  cfg.iterations = 10'000;
  cfg.record = {RecordPlan::Mode::kGeometric, 1.1, 1};
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_simulation(cfg));
  }
}
BENCHMARK(BM_SimulationRidgeRing)->Arg(25)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
