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

// The parallel paths must reproduce the serial reference bit for bit.

#include <gtest/gtest.h>

#include <atomic>
#include <stdexcept>

#include "support.hpp"
#include "tabeval/parallel.hpp"
#include "tabeval/pipeline.hpp"
#include "tabeval/synth.hpp"

namespace tabeval {
namespace {

TEST(ForEachIndexTest, VisitsEveryIndexOnce) {
  for (Execution e : {Execution::kSerial, Execution::kParallel}) {
    std::vector<std::atomic<int>> hits(1000);
    for_each_index(hits.size(), e, [&](std::size_t i) { ++hits[i]; });
    for (const auto& h : hits) EXPECT_EQ(h.load(), 1);
  }
}

TEST(ForEachIndexTest, RethrowsLowestFailingIndex) {
  for (Execution e : {Execution::kSerial, Execution::kParallel}) {
    try {
      for_each_index(100, e, [](std::size_t i) {
        if (i % 10 == 7) throw std::runtime_error(std::to_string(i));
      });
      FAIL() << "expected an exception";
    } catch (const std::runtime_error& ex) {
      EXPECT_STREQ(ex.what(), "7");
    }
  }
}

TEST(SerialParallelTest, SynthIsIdentical) {
  const auto plan = testing_support::small_plan(8, 3);
  EXPECT_TRUE(generate(plan, Execution::kSerial) ==
              generate(plan, Execution::kParallel));
}

TEST(SerialParallelTest, StoreEvaluationIsIdentical) {
  const ResultStore store = generate(testing_support::small_plan(8, 3));
  EvaluationOptions serial;
  serial.execution = Execution::kSerial;
  serial.ges.execution = Execution::kSerial;
  EvaluationOptions parallel;
  const auto a = evaluate_store(store, serial);
  const auto b = evaluate_store(store, parallel);
  EXPECT_EQ(a.test, b.test);
  EXPECT_EQ(a.val, b.val);
  EXPECT_EQ(a.ensembles, b.ensembles);
}

TEST(SerialParallelTest, BootstrapIsIdentical) {
  const ResultStore store = generate(testing_support::small_plan(8, 6));
  const auto errors = ErrorMatrix::from_table(evaluate_store(store).test);
  BootstrapOptions opts;
  opts.seed = 3;
  opts.execution = Execution::kSerial;
  const auto a = bootstrap_elo(errors, "Beta (D)", opts);
  opts.execution = Execution::kParallel;
  const auto b = bootstrap_elo(errors, "Beta (D)", opts);
  EXPECT_EQ(a.ci, b.ci);
  EXPECT_EQ(a.rating, b.rating);
}

TEST(SerialParallelTest, TrajectoryIsIdentical) {
  const ResultStore store = generate(testing_support::small_plan(8, 2));
  TrajectoryOptions opts;
  opts.grid = {1, 2, 3};
  opts.n_samples = 4;
  opts.seed = 1;
  opts.execution = Execution::kSerial;
  opts.ges.execution = Execution::kSerial;
  const auto a = tuning_trajectory(store, "Alpha", opts);
  opts.execution = Execution::kParallel;
  opts.ges.execution = Execution::kParallel;
  EXPECT_EQ(a, tuning_trajectory(store, "Alpha", opts));
}

}  // namespace
}  // namespace tabeval
