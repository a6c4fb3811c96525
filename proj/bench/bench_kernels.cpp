// Copyright 2026 The hcboot Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Bit-parallel kernels against the serial per-vertex reference, plus the
// end-to-end cost of one Monte Carlo trial.

#include <benchmark/benchmark.h>

#include "hcboot/engine.hpp"
#include "hcboot/estimator.hpp"
#include "hcboot/kernel.hpp"
#include "hcboot/reference.hpp"

namespace {

using hcboot::CubeSpec;
using hcboot::VertexSet;

void BM_StepKernel(benchmark::State& state) {
  const CubeSpec spec(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  const hcboot::Engine engine(spec);
  const VertexSet a = hcboot::sample_initial(spec, 0.5, 1, 0);
  const auto threshold = (spec.degree() + 1) / 2;
  for (auto _ : state) {
    benchmark::DoNotOptimize(engine.step(a, threshold));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(spec.num_vertices()));
}
BENCHMARK(BM_StepKernel)
    ->Args({12, 1})->Args({16, 1})->Args({20, 1})->Args({12, 2})
    ->Unit(benchmark::kMicrosecond);

void BM_StepReference(benchmark::State& state) {
  const CubeSpec spec(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  const VertexSet a = hcboot::sample_initial(spec, 0.5, 1, 0);
  const auto threshold = (spec.degree() + 1) / 2;
  for (auto _ : state) {
    benchmark::DoNotOptimize(hcboot::reference::step(spec, a, threshold));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(spec.num_vertices()));
}
BENCHMARK(BM_StepReference)
    ->Args({12, 1})->Args({16, 1})->Args({20, 1})->Args({12, 2})
    ->Unit(benchmark::kMicrosecond);

void BM_Sample(benchmark::State& state) {
  const CubeSpec spec(static_cast<int>(state.range(0)));
  std::uint64_t trial = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(hcboot::sample_initial(spec, 0.55, 7, trial++));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(spec.num_vertices()));
}
BENCHMARK(BM_Sample)->Arg(16)->Arg(20)->Unit(benchmark::kMicrosecond);

// One full trial near the critical window: sample, then run to the fixpoint.
void BM_Trial(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const CubeSpec spec(n);
  const hcboot::Engine engine(spec);
  const auto schedule = hcboot::ThresholdSchedule::make(hcboot::Variant::kBoot, state.range(1));
  const double p = static_cast<double>(state.range(2)) / 1000.0;
  std::uint64_t trial = 0;
  for (auto _ : state) {
    const VertexSet a0 = hcboot::sample_initial(spec, p, 7, trial++);
    benchmark::DoNotOptimize(engine.percolates(a0, schedule));
  }
}
BENCHMARK(BM_Trial)
    ->Args({16, 10, 550})->Args({20, 11, 500})->Args({20, 11, 550})
    ->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
