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

#ifndef TABEVAL_METRICS_HPP_
#define TABEVAL_METRICS_HPP_

#include <map>
#include <span>
#include <string_view>

#include "tabeval/result_store.hpp"

namespace tabeval {

enum class Metric { kOneMinusAuroc, kLogLoss, kRmse };

std::string_view metric_name(Metric metric);
// 1 - AUROC for binary, log-loss for multiclass, RMSE for regression.
Metric metric_for(TaskType type);

struct ErrorValue {
  double value = 0.0;
  Metric metric = Metric::kRmse;
};

// Probabilities are clipped to [kLogLossEpsilon, 1 - kLogLossEpsilon].
inline constexpr double kLogLossEpsilon = 1e-15;

// Mann-Whitney AUC: probability that a random positive outscores a random
// negative, ties counting one half (midranks). `labels` are 0/1.
// Throws UndefinedMetricError if only one class is present.
double roc_auc(std::span<const double> scores, std::span<const double> labels);

// Mean of -ln p[i, y_i] over rows of a probability matrix.
double log_loss(const Predictions& probs, std::span<const double> labels);

// Log-loss of positive-class probabilities against 0/1 labels.
double binary_log_loss(std::span<const double> positive_probs,
                       std::span<const double> labels);

double rmse(std::span<const double> preds, std::span<const double> targets);

// Leaderboard error of one outer split, dispatched on the task type.
ErrorValue split_error(const TaskSpec& task, const Predictions& preds,
                       std::span<const double> labels);

// Mean of per-split errors over the task's expected outer splits. Throws
// InputError naming the first expected split that has no error.
double dataset_error(const TaskSpec& task,
                     const std::map<SplitId, double>& split_errors);

}  // namespace tabeval

#endif  // TABEVAL_METRICS_HPP_
