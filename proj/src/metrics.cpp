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

#include "tabeval/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "tabeval/error.hpp"

namespace tabeval {
namespace {

void CheckSameLength(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw InputError(std::string(what) + ": length mismatch (" +
                     std::to_string(a) + " vs " + std::to_string(b) + ")");
  }
}

double ClippedNegLog(double p) {
  return -std::log(std::clamp(p, kLogLossEpsilon, 1.0 - kLogLossEpsilon));
}

}  // namespace

std::string_view metric_name(Metric metric) {
  switch (metric) {
    case Metric::kOneMinusAuroc:
      return "one_minus_auroc";
    case Metric::kLogLoss:
      return "logloss";
    case Metric::kRmse:
      return "rmse";
  }
  return "unknown";
}

Metric metric_for(TaskType type) {
  switch (type) {
    case TaskType::kBinary:
      return Metric::kOneMinusAuroc;
    case TaskType::kMulticlass:
      return Metric::kLogLoss;
    case TaskType::kRegression:
      return Metric::kRmse;
  }
  return Metric::kRmse;
}

double roc_auc(std::span<const double> scores, std::span<const double> labels) {
  CheckSameLength(scores.size(), labels.size(), "roc_auc");
  std::size_t n_pos = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (!std::isfinite(scores[i])) throw InputError("roc_auc: non-finite score");
    if (labels[i] == 1.0) {
      ++n_pos;
    } else if (labels[i] != 0.0) {
      throw InputError("roc_auc: labels must be 0 or 1");
    }
  }
  const std::size_t n_neg = labels.size() - n_pos;
  if (n_pos == 0 || n_neg == 0) {
    throw UndefinedMetricError("roc_auc: labels contain a single class");
  }

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] < scores[b];
  });
  // Sum of 1-based midranks of the positives.
  double positive_rank_sum = 0.0;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    std::size_t positives_in_group = 0;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) {
      if (labels[order[j]] == 1.0) ++positives_in_group;
      ++j;
    }
    const double midrank = 0.5 * static_cast<double>(i + 1 + j);
    positive_rank_sum += midrank * static_cast<double>(positives_in_group);
    i = j;
  }
  const double p = static_cast<double>(n_pos);
  const double u = positive_rank_sum - p * (p + 1.0) / 2.0;
  return u / (p * static_cast<double>(n_neg));
}

double log_loss(const Predictions& probs, std::span<const double> labels) {
  CheckSameLength(probs.rows(), labels.size(), "log_loss");
  if (labels.empty()) throw InputError("log_loss: empty input");
  double total = 0.0;
  for (std::size_t r = 0; r < probs.rows(); ++r) {
    const double y = labels[r];
    if (y < 0 || y >= static_cast<double>(probs.cols()) || y != std::floor(y)) {
      throw InputError("log_loss: label " + std::to_string(y) +
                       " out of range for " + std::to_string(probs.cols()) +
                       " classes");
    }
    total += ClippedNegLog(probs(r, static_cast<std::size_t>(y)));
  }
  return total / static_cast<double>(probs.rows());
}

double binary_log_loss(std::span<const double> positive_probs,
                       std::span<const double> labels) {
  CheckSameLength(positive_probs.size(), labels.size(), "binary_log_loss");
  if (labels.empty()) throw InputError("binary_log_loss: empty input");
  double total = 0.0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != 0.0 && labels[i] != 1.0) {
      throw InputError("binary_log_loss: labels must be 0 or 1");
    }
    const double p = labels[i] == 1.0 ? positive_probs[i] : 1.0 - positive_probs[i];
    total += ClippedNegLog(p);
  }
  return total / static_cast<double>(labels.size());
}

double rmse(std::span<const double> preds, std::span<const double> targets) {
  CheckSameLength(preds.size(), targets.size(), "rmse");
  if (preds.empty()) throw InputError("rmse: empty input");
  double total = 0.0;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    if (!std::isfinite(preds[i]) || !std::isfinite(targets[i])) {
      throw InputError("rmse: non-finite value");
    }
    const double d = preds[i] - targets[i];
    total += d * d;
  }
  return std::sqrt(total / static_cast<double>(preds.size()));
}

ErrorValue split_error(const TaskSpec& task, const Predictions& preds,
                       std::span<const double> labels) {
  const Metric metric = metric_for(task.task_type);
  if (preds.cols() != task.prediction_width()) {
    throw InputError("split_error: prediction width " +
                     std::to_string(preds.cols()) + " does not match task '" +
                     task.dataset_id + "'");
  }
  switch (metric) {
    case Metric::kOneMinusAuroc: {
      const std::vector<double> positive = preds.column(1);
      return {1.0 - roc_auc(positive, labels), metric};
    }
    case Metric::kLogLoss:
      return {log_loss(preds, labels), metric};
    case Metric::kRmse:
      return {rmse(preds.values(), labels), metric};
  }
  return {0.0, metric};
}

double dataset_error(const TaskSpec& task,
                     const std::map<SplitId, double>& split_errors) {
  const std::vector<SplitId> expected = expected_split_ids(task);
  double total = 0.0;
  for (SplitId split : expected) {
    auto it = split_errors.find(split);
    if (it == split_errors.end()) {
      throw InputError("dataset '" + task.dataset_id + "' has no error for split " +
                       to_string(split));
    }
    total += it->second;
  }
  return total / static_cast<double>(expected.size());
}

}  // namespace tabeval
