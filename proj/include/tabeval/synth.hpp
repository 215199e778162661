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

// Seeded synthetic result stores with a planted quality ordering.
//
// Every (dataset, outer split) gets its own ground truth; every method
// config predicts that truth through Gaussian noise whose scale falls with
// the method's quality and varies per config. Classification predictions are
// softmaxes of noisy logits, regression predictions are noisy targets.

#ifndef TABEVAL_SYNTH_HPP_
#define TABEVAL_SYNTH_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "tabeval/parallel.hpp"
#include "tabeval/result_store.hpp"

namespace tabeval {

struct SynthMethod {
  std::string name;
  // In [0, 1]; higher means less noise.
  double quality = 0.5;
  // "default" plus n_configs - 1 random configs r1, r2, ...
  int n_configs = 1;
};

struct TaskMix {
  double binary = 1.0;
  double multiclass = 0.0;
  double regression = 0.0;
};

struct SynthPlan {
  std::uint64_t seed = 0;
  int n_datasets = 3;
  TaskMix mix;
  std::vector<SynthMethod> methods;
  // Controls both the row counts (2/3 validation, 1/3 test) and the split
  // plan: below 2500 samples gives 30 outer splits, otherwise 9.
  std::int64_t n_samples = 300;
  double noise_scale = 1.0;
  int n_classes = 3;
};

// Throws InputError on an invalid plan (bad proportions, empty methods,
// qualities outside [0, 1], ...).
void validate_plan(const SynthPlan& plan);

// Deterministic in the plan; per-dataset generation runs under `execution`
// with derived seeds, so serial and parallel output are identical.
ResultStore generate(const SynthPlan& plan,
                     Execution execution = Execution::kParallel);

}  // namespace tabeval

#endif  // TABEVAL_SYNTH_HPP_
