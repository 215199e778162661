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

// Small builders shared by the test binaries.

#ifndef TABEVAL_TESTS_SUPPORT_HPP_
#define TABEVAL_TESTS_SUPPORT_HPP_

#include <unistd.h>

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "tabeval/result_store.hpp"
#include "tabeval/synth.hpp"

namespace testing_support {

inline tabeval::Predictions binary_probs(const std::vector<double>& positive) {
  tabeval::Predictions p(positive.size(), 2);
  for (std::size_t i = 0; i < positive.size(); ++i) {
    p(i, 0) = 1.0 - positive[i];
    p(i, 1) = positive[i];
  }
  return p;
}

inline tabeval::Predictions column(const std::vector<double>& values) {
  return tabeval::Predictions(values.size(), 1, values);
}

inline tabeval::TaskSpec binary_task(const std::string& id = "d0",
                                     std::int64_t n_samples = 100) {
  return {id, tabeval::TaskType::kBinary, 2, n_samples};
}

// Three methods of planted quality on a few small binary datasets.
inline tabeval::SynthPlan small_plan(std::uint64_t seed = 7, int n_datasets = 3) {
  tabeval::SynthPlan plan;
  plan.seed = seed;
  plan.n_datasets = n_datasets;
  plan.n_samples = 60;
  plan.methods = {{"Alpha", 0.9, 3}, {"Beta", 0.5, 2}, {"Gamma", 0.1, 1}};
  return plan;
}

// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() /
             ("tabeval_test_" + name + "_" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

// Labels with both classes present, scores with deliberate ties.
inline void random_binary_instance(std::mt19937_64& gen, std::size_t n,
                                   std::vector<double>& scores,
                                   std::vector<double>& labels) {
  std::uniform_int_distribution<int> coin(0, 1);
  std::uniform_int_distribution<int> level(0, 9);
  scores.assign(n, 0.0);
  labels.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    labels[i] = coin(gen);
    scores[i] = level(gen) / 10.0;
  }
  labels[0] = 0.0;
  labels[1] = 1.0;
}

}  // namespace testing_support

#endif  // TABEVAL_TESTS_SUPPORT_HPP_
