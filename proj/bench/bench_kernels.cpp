// Copyright 2026 The tabeval Authors.
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

// Serial reference path versus OpenMP path for the heavy kernels. The
// second benchmark argument selects the path: 0 serial, 1 parallel.

#include <benchmark/benchmark.h>

#include "tabeval/ensemble.hpp"
#include "tabeval/pipeline.hpp"
#include "tabeval/rating.hpp"
#include "tabeval/simulate.hpp"
#include "tabeval/synth.hpp"

namespace {

using namespace tabeval;

Execution Mode(const benchmark::State& state) {
  return state.range(1) == 0 ? Execution::kSerial : Execution::kParallel;
}

const ResultStore& Store() {
  static const ResultStore store = [] {
    SynthPlan plan;
    plan.seed = 1;
    plan.n_datasets = 12;
    plan.n_samples = 600;
    plan.mix = {0.5, 0.25, 0.25};
    plan.methods = {{"GBM", 0.8, 16}, {"RandomForest", 0.5, 8}, {"KNN", 0.2, 4}};
    return generate(plan);
  }();
  return store;
}

void BM_GesFit(benchmark::State& state) {
  const auto n_cand = static_cast<std::size_t>(state.range(0));
  const ResultStore& store = Store();
  const auto recs = store.records_for("ds000", "GBM", SplitId{0, 0});
  PredictionPool pool;
  for (std::size_t c = 0; c < n_cand && c < recs.size(); ++c) {
    pool.emplace(recs[c]->config_id, std::cref(recs[c]->pred_val));
  }
  GesOptions opts;
  opts.execution = Mode(state);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        ges_fit(pool, recs.front()->y_val, store.task("ds000"), opts));
  }
}
BENCHMARK(BM_GesFit)->ArgsProduct({{16}, {0, 1}})->Unit(benchmark::kMillisecond);

void BM_EvaluateStore(benchmark::State& state) {
  EvaluationOptions opts;
  opts.execution = Mode(state);
  opts.ges.execution = Execution::kSerial;
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_store(Store(), opts));
}
BENCHMARK(BM_EvaluateStore)->ArgsProduct({{0}, {0, 1}})->Unit(benchmark::kMillisecond);

void BM_Bootstrap(benchmark::State& state) {
  static const ErrorMatrix errors =
      ErrorMatrix::from_table(evaluate_store(Store()).test);
  BootstrapOptions opts;
  opts.n_bootstrap = static_cast<int>(state.range(0));
  opts.seed = 3;
  opts.execution = Mode(state);
  for (auto _ : state) {
    benchmark::DoNotOptimize(bootstrap_elo(errors, "RandomForest (D)", opts));
  }
}
BENCHMARK(BM_Bootstrap)->ArgsProduct({{200}, {0, 1}})->Unit(benchmark::kMillisecond);

void BM_Trajectory(benchmark::State& state) {
  TrajectoryOptions opts;
  opts.grid = {1, 4, 8};
  opts.n_samples = static_cast<int>(state.range(0));
  opts.seed = 5;
  opts.execution = Mode(state);
  opts.ges.execution = Execution::kSerial;
  for (auto _ : state) {
    benchmark::DoNotOptimize(tuning_trajectory(Store(), "GBM", opts));
  }
}
BENCHMARK(BM_Trajectory)->ArgsProduct({{5}, {0, 1}})->Unit(benchmark::kMillisecond);

void BM_Synth(benchmark::State& state) {
  SynthPlan plan;
  plan.seed = 2;
  plan.n_datasets = static_cast<int>(state.range(0));
  plan.methods = {{"GBM", 0.8, 8}, {"KNN", 0.2, 2}};
  for (auto _ : state) benchmark::DoNotOptimize(generate(plan, Mode(state)));
}
BENCHMARK(BM_Synth)->ArgsProduct({{8}, {0, 1}})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
