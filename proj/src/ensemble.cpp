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

#include "tabeval/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tabeval/error.hpp"
#include "tabeval/metrics.hpp"

namespace tabeval {
namespace {

constexpr double kRenormalizeThreshold = 1e-12;

void RenormalizeRows(Predictions& preds) {
  if (preds.cols() < 2) return;
  for (std::size_t r = 0; r < preds.rows(); ++r) {
    double sum = 0.0;
    for (double p : preds.row(r)) sum += p;
    if (std::abs(sum - 1.0) > kRenormalizeThreshold && sum > 0.0) {
      for (std::size_t c = 0; c < preds.cols(); ++c) preds(r, c) /= sum;
    }
  }
}

const std::vector<double>& SharedLabels(
    const std::vector<const PredictionRecord*>& records, bool validation) {
  const auto& first =
      validation ? records.front()->y_val : records.front()->y_test;
  for (const auto* r : records) {
    const auto& y = validation ? r->y_val : r->y_test;
    if (y != first) {
      throw InputError("records of " + to_string(records.front()->key()) +
                       " and " + to_string(r->key()) +
                       " disagree on the split's " +
                       (validation ? "y_val" : "y_test"));
    }
  }
  return first;
}

}  // namespace

Predictions bag_fold_predictions(std::span<const Predictions> fold_preds) {
  if (fold_preds.empty()) {
    throw InputError("bag_fold_predictions: no fold predictions");
  }
  const Predictions& first = fold_preds.front();
  Predictions out(first.rows(), first.cols());
  for (const Predictions& p : fold_preds) {
    if (!p.same_shape(first)) {
      throw InputError("bag_fold_predictions: shape mismatch");
    }
    auto dst = out.values();
    auto src = p.values();
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
  }
  const auto n = static_cast<double>(fold_preds.size());
  for (double& v : out.values()) v /= n;
  RenormalizeRows(out);
  return out;
}

std::string select_best_config(
    const std::map<std::string, double>& val_errors) {
  if (val_errors.empty()) {
    throw InputError("select_best_config: no configs");
  }
  auto best = val_errors.begin();
  for (auto it = val_errors.begin(); it != val_errors.end(); ++it) {
    if (!std::isfinite(it->second)) {
      throw InputError("select_best_config: non-finite error for '" +
                       it->first + "'");
    }
    // Map iteration is in id order, so strict < keeps the smallest id.
    if (it->second < best->second) best = it;
  }
  return best->first;
}

GesWeights ges_fit(const PredictionPool& val_preds,
                   std::span<const double> y_val, const TaskSpec& task,
                   const GesOptions& options) {
  if (val_preds.empty()) throw InputError("ges_fit: empty candidate pool");
  if (options.n_steps < 1) throw InputError("ges_fit: n_steps must be >= 1");

  std::vector<std::string> ids;
  std::vector<const Predictions*> preds;
  for (const auto& [id, p] : val_preds) {
    const Predictions& block = p.get();
    if (block.rows() != y_val.size() || block.empty() ||
        block.cols() != task.prediction_width()) {
      throw InputError("ges_fit: predictions of '" + id +
                       "' do not match the validation labels");
    }
    for (double v : block.values()) {
      if (!std::isfinite(v)) {
        throw InputError("ges_fit: non-finite prediction in '" + id + "'");
      }
    }
    ids.push_back(id);
    preds.push_back(&block);
  }

  const std::size_t n_values = preds.front()->values().size();
  const std::size_t rows = preds.front()->rows();
  const std::size_t cols = preds.front()->cols();
  std::vector<double> selection_sum(n_values, 0.0);
  std::vector<int> counts(ids.size(), 0);
  std::vector<double> candidate_errors(ids.size());

  GesWeights result;
  result.n_steps = options.n_steps;
  result.trace.reserve(static_cast<std::size_t>(options.n_steps));
  for (int round = 1; round <= options.n_steps; ++round) {
    const auto divisor = static_cast<double>(round);
    for_each_index(ids.size(), options.execution, [&](std::size_t i) {
      Predictions mix(rows, cols);
      auto dst = mix.values();
      auto src = preds[i]->values();
      for (std::size_t k = 0; k < n_values; ++k) {
        dst[k] = (selection_sum[k] + src[k]) / divisor;
      }
      candidate_errors[i] = split_error(task, mix, y_val).value;
    });
    std::size_t best = 0;
    for (std::size_t i = 1; i < ids.size(); ++i) {
      if (candidate_errors[i] < candidate_errors[best]) best = i;
    }
    auto src = preds[best]->values();
    for (std::size_t k = 0; k < n_values; ++k) selection_sum[k] += src[k];
    ++counts[best];
    result.trace.push_back({ids[best], candidate_errors[best]});
  }

  int used_rounds = options.n_steps;
  if (options.use_best_iteration) {
    auto best_round = std::min_element(
        result.trace.begin(), result.trace.end(),
        [](const GesStep& a, const GesStep& b) { return a.val_error < b.val_error; });
    used_rounds = static_cast<int>(best_round - result.trace.begin()) + 1;
    std::fill(counts.begin(), counts.end(), 0);
    for (int r = 0; r < used_rounds; ++r) {
      const auto& id = result.trace[static_cast<std::size_t>(r)].candidate;
      ++counts[static_cast<std::size_t>(
          std::lower_bound(ids.begin(), ids.end(), id) - ids.begin())];
    }
  }
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (counts[i] > 0) {
      result.weights[ids[i]] =
          static_cast<double>(counts[i]) / static_cast<double>(used_rounds);
    }
  }
  return result;
}

Predictions ges_predict(const GesWeights& weights, const PredictionPool& preds) {
  if (weights.weights.empty()) throw InputError("ges_predict: empty weights");
  Predictions out;
  bool first = true;
  for (const auto& [id, w] : weights.weights) {
    auto it = preds.find(id);
    if (it == preds.end()) {
      throw InputError("ges_predict: no predictions for weighted member '" +
                       id + "'");
    }
    const Predictions& p = it->second.get();
    if (first) {
      out = Predictions(p.rows(), p.cols());
      first = false;
    } else if (!p.same_shape(out)) {
      throw InputError("ges_predict: shape mismatch for '" + id + "'");
    }
    auto dst = out.values();
    auto src = p.values();
    for (std::size_t k = 0; k < dst.size(); ++k) dst[k] += w * src[k];
  }
  RenormalizeRows(out);
  return out;
}

double RegimeEval::mean_test_error() const {
  double total = 0.0;
  for (double e : test_errors) total += e;
  return total / static_cast<double>(test_errors.size());
}

double RegimeEval::mean_val_error() const {
  double total = 0.0;
  for (double e : val_errors) total += e;
  return total / static_cast<double>(val_errors.size());
}

RegimeEvals evaluate_regimes(const ResultStore& store,
                             const std::string& dataset_id,
                             const std::string& method, const GesOptions& ges,
                             Execution split_execution) {
  const TaskSpec& task = store.task(dataset_id);
  const std::vector<SplitId> splits = expected_split_ids(task);
  const std::vector<std::string> configs = store.configs(dataset_id, method);
  if (configs.empty()) {
    throw InputError("method '" + method + "' has no records on '" +
                     dataset_id + "'");
  }
  if (!std::binary_search(configs.begin(), configs.end(),
                          std::string(kDefaultConfig))) {
    throw InputError("method '" + method + "' has no '" +
                     std::string(kDefaultConfig) + "' config on '" +
                     dataset_id + "'");
  }
  const std::vector<SplitId> present = store.splits(dataset_id, method);
  for (SplitId split : splits) {
    if (!std::binary_search(present.begin(), present.end(), split)) {
      throw InputError("method '" + method + "' on '" + dataset_id +
                       "' is missing outer split " + to_string(split));
    }
  }

  RegimeEvals out;
  for (Regime regime : kAllRegimes) {
    RegimeEval& e = out[regime_index(regime)];
    e.dataset_id = dataset_id;
    e.method = method;
    e.regime = regime;
    e.splits = splits;
    e.test_errors.assign(splits.size(), 0.0);
    e.val_errors.assign(splits.size(), 0.0);
  }
  out[regime_index(Regime::kTuned)].selected.resize(splits.size());
  out[regime_index(Regime::kTunedEnsembled)].ensembles.resize(splits.size());

  for_each_index(splits.size(), split_execution, [&](std::size_t s) {
    const auto records = store.records_for(dataset_id, method, splits[s]);
    const auto& y_val = SharedLabels(records, true);
    const auto& y_test = SharedLabels(records, false);

    std::map<std::string, double> val_errors;
    std::map<std::string, double> test_errors;
    PredictionPool val_pool;
    PredictionPool test_pool;
    for (const auto* r : records) {
      val_errors[r->config_id] = split_error(task, r->pred_val, y_val).value;
      test_errors[r->config_id] = split_error(task, r->pred_test, y_test).value;
      val_pool.emplace(r->config_id, std::cref(r->pred_val));
      test_pool.emplace(r->config_id, std::cref(r->pred_test));
    }

    const std::string def(kDefaultConfig);
    auto& d = out[regime_index(Regime::kDefault)];
    d.test_errors[s] = test_errors.at(def);
    d.val_errors[s] = val_errors.at(def);

    auto& t = out[regime_index(Regime::kTuned)];
    const std::string best = select_best_config(val_errors);
    t.selected[s] = best;
    t.test_errors[s] = test_errors.at(best);
    t.val_errors[s] = val_errors.at(best);

    auto& te = out[regime_index(Regime::kTunedEnsembled)];
    GesWeights weights = ges_fit(val_pool, y_val, task, ges);
    te.test_errors[s] =
        split_error(task, ges_predict(weights, test_pool), y_test).value;
    te.val_errors[s] =
        split_error(task, ges_predict(weights, val_pool), y_val).value;
    te.ensembles[s] = std::move(weights);
  });
  return out;
}

}  // namespace tabeval
