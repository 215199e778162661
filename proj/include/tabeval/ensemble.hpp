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

// Evaluation regimes of a method on one dataset.
//
// default          the "default" configuration
// tuned            per outer split, the configuration with the lowest
//                  out-of-fold validation error
// tuned_ensembled  per outer split, a greedy ensemble selection (GES) over the
//                  validation predictions of all configurations
//
// GES builds a bag of selections with replacement. In round r it scores, for
// every candidate i, the uniform average of the r-1 selections so far plus i,
// and commits the candidate with the lowest validation error (smallest id on
// ties). Final weights are selection frequencies.

#ifndef TABEVAL_ENSEMBLE_HPP_
#define TABEVAL_ENSEMBLE_HPP_

#include <array>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "tabeval/eval_table.hpp"
#include "tabeval/parallel.hpp"
#include "tabeval/result_store.hpp"

namespace tabeval {

inline constexpr int kDefaultGesSteps = 40;

// Candidate id -> prediction block. Non-owning.
using PredictionPool =
    std::map<std::string, std::reference_wrapper<const Predictions>>;

// Elementwise mean of per-fold predictions; multi-column rows are
// renormalised to sum 1 when float drift exceeds 1e-12.
Predictions bag_fold_predictions(std::span<const Predictions> fold_preds);

// Config with minimum validation error; smallest id on ties.
std::string select_best_config(const std::map<std::string, double>& val_errors);

struct GesOptions {
  int n_steps = kDefaultGesSteps;
  // Keep the weights of the round with the lowest validation error instead
  // of the final round.
  bool use_best_iteration = false;
  // Candidate scoring within a round.
  Execution execution = Execution::kParallel;
};

struct GesStep {
  std::string candidate;
  double val_error = 0.0;
  bool operator==(const GesStep&) const = default;
};

struct GesWeights {
  // Nonzero weights only; they sum to 1.
  std::map<std::string, double> weights;
  int n_steps = 0;
  std::vector<GesStep> trace;
  bool operator==(const GesWeights&) const = default;
};

GesWeights ges_fit(const PredictionPool& val_preds,
                   std::span<const double> y_val, const TaskSpec& task,
                   const GesOptions& options = {});

// Weighted average of the pool members that carry weight.
Predictions ges_predict(const GesWeights& weights, const PredictionPool& preds);

struct RegimeEval {
  std::string dataset_id;
  std::string method;
  Regime regime = Regime::kDefault;
  std::vector<SplitId> splits;
  std::vector<double> test_errors;
  std::vector<double> val_errors;
  // Tuned: the config picked on each split.
  std::vector<std::string> selected;
  // Tuned + ensembled: the fitted weights on each split.
  std::vector<GesWeights> ensembles;

  double mean_test_error() const;
  double mean_val_error() const;
  bool operator==(const RegimeEval&) const = default;
};

constexpr std::size_t regime_index(Regime regime) {
  return static_cast<std::size_t>(regime);
}

using RegimeEvals = std::array<RegimeEval, 3>;

// All three regimes of `method` on `dataset_id`, split by split. Splits are
// processed under `split_execution`. Throws InputError if an expected split
// or the default config is missing.
RegimeEvals evaluate_regimes(const ResultStore& store,
                             const std::string& dataset_id,
                             const std::string& method,
                             const GesOptions& ges = {},
                             Execution split_execution = Execution::kParallel);

}  // namespace tabeval

#endif  // TABEVAL_ENSEMBLE_HPP_
