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

#include "tabeval/simulate.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <set>

#include "tabeval/error.hpp"
#include "tabeval/metrics.hpp"
#include "tabeval/rng.hpp"

namespace tabeval {
namespace {

double Mean(const std::vector<double>& values) {
  double total = 0.0;
  for (double v : values) total += v;
  return total / static_cast<double>(values.size());
}

struct SplitEnsemble {
  double test_error = 0.0;
  double val_error = 0.0;
  GesWeights weights;
};

// GES over `records` (one per candidate, all on the same split) keyed by
// `ids`, scored on test and validation.
SplitEnsemble EnsembleSplit(const TaskSpec& task,
                            const std::vector<const PredictionRecord*>& records,
                            const std::vector<std::string>& ids,
                            const GesOptions& ges) {
  PredictionPool val_pool;
  PredictionPool test_pool;
  const auto& y_val = records.front()->y_val;
  const auto& y_test = records.front()->y_test;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (records[i]->y_val != y_val || records[i]->y_test != y_test) {
      throw InputError("records " + to_string(records.front()->key()) + " and " +
                       to_string(records[i]->key()) +
                       " disagree on the split's labels");
    }
    val_pool.emplace(ids[i], std::cref(records[i]->pred_val));
    test_pool.emplace(ids[i], std::cref(records[i]->pred_test));
  }
  SplitEnsemble out;
  out.weights = ges_fit(val_pool, y_val, task, ges);
  out.test_error =
      split_error(task, ges_predict(out.weights, test_pool), y_test).value;
  out.val_error =
      split_error(task, ges_predict(out.weights, val_pool), y_val).value;
  return out;
}

void RequireSplits(const ResultStore& store, const std::string& dataset_id,
                   const std::string& method,
                   const std::vector<SplitId>& expected) {
  const auto present = store.splits(dataset_id, method);
  for (SplitId s : expected) {
    if (!std::binary_search(present.begin(), present.end(), s)) {
      throw InputError("method '" + method + "' on '" + dataset_id +
                       "' is missing outer split " + to_string(s));
    }
  }
}

}  // namespace

std::string candidate_id(const std::string& method, const std::string& config) {
  return method + "/" + config;
}

std::string candidate_family(const std::string& candidate) {
  const auto slash = candidate.rfind('/');
  return slash == std::string::npos ? candidate : candidate.substr(0, slash);
}

std::vector<TrajectoryPoint> tuning_trajectory(const ResultStore& store,
                                               const std::string& method,
                                               const TrajectoryOptions& options) {
  std::vector<std::string> datasets;
  for (const auto& d : store.datasets()) {
    if (store.has(d, method)) datasets.push_back(d);
  }
  if (datasets.empty()) {
    throw InputError("method '" + method + "' has no records");
  }
  const std::vector<std::string> configs = store.configs(datasets.front(), method);
  for (const auto& d : datasets) {
    if (store.configs(d, method) != configs) {
      throw InputError("method '" + method +
                       "' has a different config set on '" + d + "'");
    }
    RequireSplits(store, d, method, expected_split_ids(store.task(d)));
  }
  if (options.n_samples < 1) throw InputError("n_samples must be >= 1");
  const int total = static_cast<int>(configs.size());

  std::vector<TrajectoryPoint> out;
  for (int n : options.grid) {
    if (n < 1 || n > total) {
      throw InputError("trajectory grid point " + std::to_string(n) +
                       " outside 1.." + std::to_string(total) +
                       " available configs of '" + method + "'");
    }
    const bool full = n == total;
    const std::size_t n_draws = full ? 1 : static_cast<std::size_t>(options.n_samples);

    std::vector<std::vector<std::size_t>> draws(n_draws);
    const std::uint64_t point_seed =
        derive_seed(options.seed, static_cast<std::uint64_t>(n));
    for (std::size_t j = 0; j < n_draws; ++j) {
      std::vector<std::size_t> idx(configs.size());
      std::iota(idx.begin(), idx.end(), 0);
      if (!full) {
        Xoshiro256 rng(derive_seed(point_seed, j));
        // Partial Fisher-Yates: the first n slots are the draw.
        for (std::size_t i = 0; i < static_cast<std::size_t>(n); ++i) {
          const std::size_t pick = i + rng.below(idx.size() - i);
          std::swap(idx[i], idx[pick]);
        }
        idx.resize(static_cast<std::size_t>(n));
        std::sort(idx.begin(), idx.end());
      }
      draws[j] = std::move(idx);
    }

    // One task per (draw, dataset); each writes its own slot.
    std::vector<double> test(n_draws * datasets.size());
    std::vector<double> val(n_draws * datasets.size());
    for_each_index(test.size(), options.execution, [&](std::size_t slot) {
      const std::size_t j = slot / datasets.size();
      const std::string& d = datasets[slot % datasets.size()];
      const TaskSpec& task = store.task(d);
      std::vector<std::string> ids;
      for (std::size_t c : draws[j]) ids.push_back(configs[c]);
      std::vector<double> split_test;
      std::vector<double> split_val;
      for (SplitId s : expected_split_ids(task)) {
        std::vector<const PredictionRecord*> records;
        for (const auto& id : ids) {
          records.push_back(store.find({d, method, id, s}));
        }
        const SplitEnsemble e = EnsembleSplit(task, records, ids, options.ges);
        split_test.push_back(e.test_error);
        split_val.push_back(e.val_error);
      }
      test[slot] = Mean(split_test);
      val[slot] = Mean(split_val);
    });

    TrajectoryPoint point;
    point.method = method;
    point.n_configs = n;
    point.sampled = !full;
    for (std::size_t di = 0; di < datasets.size(); ++di) {
      if (full) {
        point.test_error[datasets[di]] = test[di];
        point.val_error[datasets[di]] = val[di];
        continue;
      }
      double t = 0.0;
      double v = 0.0;
      for (std::size_t j = 0; j < n_draws; ++j) {
        t += test[j * datasets.size() + di];
        v += val[j * datasets.size() + di];
      }
      point.test_error[datasets[di]] = t / static_cast<double>(n_draws);
      point.val_error[datasets[di]] = v / static_cast<double>(n_draws);
    }
    out.push_back(std::move(point));
  }
  return out;
}

std::string trajectory_label(const TrajectoryPoint& point) {
  return point.method + " (n=" + std::to_string(point.n_configs) + ")";
}

EvalTable trajectory_table(std::span<const TrajectoryPoint> points,
                           bool validation) {
  EvalTable out;
  for (const auto& p : points) {
    const auto& errors = validation ? p.val_error : p.test_error;
    for (const auto& [dataset, error] : errors) {
      out.set(trajectory_label(p), dataset, error);
    }
  }
  return out;
}

std::map<std::string, double> overfitting_gap(const EloRating& test,
                                              const EloRating& validation) {
  std::map<std::string, double> out;
  if (test.ratings.size() != validation.ratings.size()) {
    throw InputError("overfitting_gap: test and validation ratings cover "
                     "different entries");
  }
  for (const auto& [entry, test_elo] : test.ratings) {
    auto it = validation.ratings.find(entry);
    if (it == validation.ratings.end()) {
      throw InputError("overfitting_gap: '" + entry +
                       "' has no validation rating");
    }
    out[entry] = it->second - test_elo;
  }
  return out;
}

double CrossModelResult::mean_test_error() const { return Mean(test_errors); }
double CrossModelResult::mean_val_error() const { return Mean(val_errors); }

CrossModelResult cross_model_ensemble(const ResultStore& store,
                                      const std::string& dataset_id,
                                      const CandidateFilter& filter,
                                      const GesOptions& ges,
                                      Execution split_execution) {
  const TaskSpec& task = store.task(dataset_id);
  const std::vector<SplitId> splits = expected_split_ids(task);
  std::vector<std::pair<std::string, std::string>> pool;
  for (const auto& method : store.methods_for(dataset_id)) {
    bool used = false;
    for (const auto& config : store.configs(dataset_id, method)) {
      if (!filter || filter(method, config)) {
        pool.emplace_back(method, config);
        used = true;
      }
    }
    if (used) RequireSplits(store, dataset_id, method, splits);
  }
  if (pool.empty()) {
    throw InputError("cross_model_ensemble: no candidates on '" + dataset_id +
                     "'");
  }
  std::vector<std::string> ids;
  for (const auto& [m, c] : pool) ids.push_back(candidate_id(m, c));

  CrossModelResult out;
  out.dataset_id = dataset_id;
  out.splits = splits;
  out.test_errors.resize(splits.size());
  out.val_errors.resize(splits.size());
  out.weights.resize(splits.size());
  for_each_index(splits.size(), split_execution, [&](std::size_t s) {
    std::vector<const PredictionRecord*> records;
    for (const auto& [m, c] : pool) {
      records.push_back(store.find({dataset_id, m, c, splits[s]}));
    }
    SplitEnsemble e = EnsembleSplit(task, records, ids, ges);
    out.test_errors[s] = e.test_error;
    out.val_errors[s] = e.val_error;
    out.weights[s] = std::move(e.weights);
  });
  return out;
}

std::map<std::string, double> ensemble_weight_report(
    const std::map<std::string, std::vector<GesWeights>>& weights_by_dataset) {
  std::map<std::string, double> out;
  std::size_t n_datasets = 0;
  for (const auto& [dataset, splits] : weights_by_dataset) {
    if (splits.empty()) continue;
    ++n_datasets;
    std::map<std::string, double> dataset_sum;
    for (const auto& w : splits) {
      std::map<std::string, double> family;
      for (const auto& [id, weight] : w.weights) {
        family[candidate_family(id)] += weight;
      }
      for (const auto& [name, weight] : family) dataset_sum[name] += weight;
    }
    for (const auto& [name, total] : dataset_sum) {
      out[name] += total / static_cast<double>(splits.size());
    }
  }
  if (n_datasets == 0) throw InputError("ensemble_weight_report: no weights");
  for (auto& [name, total] : out) total /= static_cast<double>(n_datasets);
  return out;
}

Portfolio greedy_portfolio(const ErrorMatrix& candidate_errors, int max_size) {
  const std::size_t k = candidate_errors.n_entries();
  const std::size_t n = candidate_errors.n_datasets();
  if (k == 0) throw InputError("portfolio: empty candidate pool");
  if (n == 0) throw InputError("portfolio: no training datasets");
  if (max_size < 1) throw InputError("portfolio: max_size must be >= 1");

  std::vector<double> norm(k * n, 0.0);
  for (std::size_t d = 0; d < n; ++d) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t c = 0; c < k; ++c) {
      lo = std::min(lo, candidate_errors(c, d));
      hi = std::max(hi, candidate_errors(c, d));
    }
    for (std::size_t c = 0; c < k; ++c) {
      norm[c * n + d] = hi > lo ? (candidate_errors(c, d) - lo) / (hi - lo) : 0.0;
    }
  }

  Portfolio out;
  out.max_size = max_size;
  out.training_datasets = candidate_errors.datasets();
  // Best normalised error per dataset among current members; an empty
  // portfolio counts as the worst possible value.
  std::vector<double> best(n, 1.0);
  std::vector<bool> taken(k, false);
  const std::size_t steps = std::min<std::size_t>(static_cast<std::size_t>(max_size), k);
  for (std::size_t step = 0; step < steps; ++step) {
    std::size_t pick = k;
    double pick_objective = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < k; ++c) {
      if (taken[c]) continue;
      double total = 0.0;
      for (std::size_t d = 0; d < n; ++d) {
        total += std::min(best[d], norm[c * n + d]);
      }
      const double objective = total / static_cast<double>(n);
      if (objective < pick_objective) {
        pick = c;
        pick_objective = objective;
      }
    }
    taken[pick] = true;
    for (std::size_t d = 0; d < n; ++d) best[d] = std::min(best[d], norm[pick * n + d]);
    out.members.push_back(candidate_errors.entries()[pick]);
    out.objective.push_back(pick_objective);
  }
  return out;
}

EvalTable candidate_errors(const ResultStore& store, Execution execution) {
  const std::vector<std::string> datasets = store.datasets();
  std::vector<std::vector<std::pair<std::string, double>>> per_dataset(
      datasets.size());
  for_each_index(datasets.size(), execution, [&](std::size_t di) {
    const std::string& d = datasets[di];
    const TaskSpec& task = store.task(d);
    const std::vector<SplitId> splits = expected_split_ids(task);
    for (const auto& method : store.methods_for(d)) {
      const auto present = store.splits(d, method);
      if (!std::includes(present.begin(), present.end(), splits.begin(),
                         splits.end())) {
        continue;
      }
      for (const auto& config : store.configs(d, method)) {
        std::map<SplitId, double> errors;
        for (SplitId s : splits) {
          const auto* r = store.find({d, method, config, s});
          errors[s] = split_error(task, r->pred_test, r->y_test).value;
        }
        per_dataset[di].emplace_back(candidate_id(method, config),
                                     dataset_error(task, errors));
      }
    }
  });
  EvalTable out;
  for (std::size_t di = 0; di < datasets.size(); ++di) {
    for (const auto& [id, error] : per_dataset[di]) out.set(id, datasets[di], error);
  }
  return out;
}

Portfolio portfolio_learn(const ResultStore& store, int max_size,
                          const std::string& held_out, Execution execution) {
  const std::vector<std::string> all = store.datasets();
  if (std::find(all.begin(), all.end(), held_out) == all.end()) {
    throw InputError("held-out dataset '" + held_out + "' is not in the store");
  }
  if (all.size() < 2) {
    throw InputError("portfolio learning needs at least 2 datasets");
  }
  std::vector<std::string> training;
  for (const auto& d : all) {
    if (d != held_out) training.push_back(d);
  }
  const EvalTable errors = candidate_errors(store.with_datasets(training), execution);
  std::vector<std::string> complete;
  for (const auto& id : errors.entries()) {
    const bool covers = std::all_of(training.begin(), training.end(),
                                    [&](const std::string& d) {
                                      return errors.contains(id, d);
                                    });
    if (covers) complete.push_back(id);
  }
  if (complete.empty()) {
    throw InputError("portfolio: no candidate covers every training dataset");
  }
  return greedy_portfolio(ErrorMatrix::from_table(errors.select(complete)),
                          max_size);
}

CrossModelResult evaluate_portfolio(const ResultStore& store,
                                    const Portfolio& portfolio,
                                    const std::string& held_out,
                                    const GesOptions& ges,
                                    Execution split_execution) {
  const std::set<std::string> members(portfolio.members.begin(),
                                      portfolio.members.end());
  return cross_model_ensemble(
      store, held_out,
      [&](const std::string& method, const std::string& config) {
        return members.count(candidate_id(method, config)) > 0;
      },
      ges, split_execution);
}

}  // namespace tabeval
