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

#include "tabeval/pipeline.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "tabeval/error.hpp"

namespace tabeval {
namespace {

std::vector<std::string> SplitList(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::string ResolveReference(const EvalTable& table, const std::string& reference) {
  const std::string label = reference_label(reference);
  const auto entries = table.entries();
  if (std::find(entries.begin(), entries.end(), label) == entries.end()) {
    std::string available;
    for (const auto& e : entries) available += (available.empty() ? "" : ", ") + e;
    throw ConfigError("reference '" + label + "' is not among the rated "
                      "entries (" + available + ")");
  }
  return label;
}

}  // namespace

StoreEvaluation evaluate_store(const ResultStore& store,
                               const EvaluationOptions& options) {
  std::vector<std::pair<std::string, std::string>> pairs;
  for (const auto& d : store.datasets()) {
    for (const auto& m : store.methods_for(d)) pairs.emplace_back(d, m);
  }
  GesOptions inner = options.ges;
  inner.execution = Execution::kSerial;
  std::vector<RegimeEvals> results(pairs.size());
  for_each_index(pairs.size(), options.execution, [&](std::size_t i) {
    results[i] = evaluate_regimes(store, pairs[i].first, pairs[i].second, inner,
                                  Execution::kSerial);
  });
  StoreEvaluation out;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto& [dataset, method] = pairs[i];
    for (Regime regime : options.regimes) {
      const RegimeEval& e = results[i][regime_index(regime)];
      const std::string label = entry_label(method, regime);
      out.test.set(label, dataset, e.mean_test_error());
      out.val.set(label, dataset, e.mean_val_error());
      if (regime == Regime::kTunedEnsembled) {
        out.ensembles[label][dataset] = e.ensembles;
      }
    }
  }
  return out;
}

ResultStore filter_datasets(const ResultStore& store, const std::string& filter) {
  if (filter.empty()) return store;
  std::vector<std::string> keep;
  if (filter.rfind("type:", 0) == 0) {
    const TaskType type = parse_task_type(filter.substr(5));
    for (const auto& [id, task] : store.tasks()) {
      if (task.task_type == type) keep.push_back(id);
    }
  } else {
    for (const auto& id : SplitList(filter)) {
      if (!store.tasks().count(id)) {
        throw ConfigError("dataset filter names unknown dataset '" + id + "'");
      }
      keep.push_back(id);
    }
  }
  if (keep.empty()) throw ConfigError("dataset filter '" + filter + "' keeps nothing");
  return store.with_datasets(keep);
}

Leaderboard build_leaderboard(const EvalTable& errors,
                              const LeaderboardOptions& options) {
  Leaderboard out;
  out.reference = ResolveReference(errors, options.reference);
  out.n_bootstrap = options.bootstrap.n_bootstrap;
  out.seed = options.bootstrap.seed;
  out.errors = options.impute ? impute_missing(errors, out.reference) : errors;
  const ErrorMatrix matrix = ErrorMatrix::from_table(out.errors);
  out.datasets = matrix.datasets();

  const EloEstimate elo = bootstrap_elo(matrix, out.reference, options.bootstrap);
  const auto scores = normalized_scores(matrix);
  const auto avg = average_ranks(matrix);
  const auto harmonic = harmonic_mean_ranks(matrix);
  const auto wins = champion_counts(matrix);
  const auto improv = improvability(matrix);
  for (const auto& entry : matrix.entries()) {
    LeaderboardRow row;
    row.entry = entry;
    row.elo = elo.rating.at(entry);
    row.elo_lower = elo.ci.intervals.at(entry).lower;
    row.elo_upper = elo.ci.intervals.at(entry).upper;
    row.normalized_score = scores.at(entry);
    row.average_rank = avg.at(entry);
    row.harmonic_mean_rank = harmonic.at(entry);
    row.wins = wins.at(entry);
    row.improvability = improv.at(entry);
    row.imputed_count = out.errors.imputed_count(entry);
    out.rows.push_back(row);
  }
  std::sort(out.rows.begin(), out.rows.end(),
            [](const LeaderboardRow& a, const LeaderboardRow& b) {
              if (a.elo != b.elo) return a.elo > b.elo;
              return a.entry < b.entry;
            });
  return out;
}

TrajectoryReport build_trajectory_report(const ResultStore& store,
                                         const TrajectoryRequest& request) {
  TrajectoryReport out;
  std::vector<std::string> methods =
      request.methods.empty() ? store.methods() : request.methods;
  for (const auto& method : methods) {
    TrajectoryOptions options;
    options.n_samples = request.n_samples;
    options.seed = request.seed;
    options.ges = request.ges;
    options.execution = request.execution;
    int total = 0;
    for (const auto& d : store.datasets()) {
      if (store.has(d, method)) {
        total = static_cast<int>(store.configs(d, method).size());
        break;
      }
    }
    std::set<int> grid;
    for (int n : request.grid) grid.insert(n == 0 ? total : n);
    options.grid.assign(grid.begin(), grid.end());
    auto points = tuning_trajectory(store, method, options);
    for (auto& p : points) out.points.push_back(std::move(p));
  }

  // The reference's default regime anchors both ratings.
  out.reference = reference_label(request.reference);
  const auto slash = request.reference.rfind('/');
  const std::string ref_method = slash == std::string::npos
                                     ? request.reference
                                     : request.reference.substr(0, slash);
  EvalTable test = trajectory_table(out.points, false);
  EvalTable val = trajectory_table(out.points, true);
  const Regime ref_regime =
      slash == std::string::npos ? Regime::kDefault
                                 : parse_regime(request.reference.substr(slash + 1));
  bool found = false;
  for (const auto& d : store.datasets()) {
    if (!store.has(d, ref_method)) continue;
    found = true;
    GesOptions ges = request.ges;
    ges.execution = Execution::kSerial;
    const RegimeEvals evals =
        evaluate_regimes(store, d, ref_method, ges, request.execution);
    const RegimeEval& e = evals[regime_index(ref_regime)];
    test.set(out.reference, d, e.mean_test_error());
    val.set(out.reference, d, e.mean_val_error());
  }
  if (!found) {
    throw ConfigError("reference method '" + ref_method + "' has no records");
  }
  out.test_elo = calibrate(
      fit_bradley_terry(pairwise_outcomes(test), request.fit), out.reference);
  out.val_elo = calibrate(
      fit_bradley_terry(pairwise_outcomes(val), request.fit), out.reference);
  out.overfitting_gap = overfitting_gap(out.test_elo, out.val_elo);
  return out;
}

PortfolioReport build_portfolio_report(const ResultStore& store, int max_size,
                                       const std::vector<std::string>& held_out,
                                       const GesOptions& ges,
                                       Execution execution) {
  PortfolioReport out;
  out.max_size = max_size;
  out.ges_steps = ges.n_steps;
  const std::vector<std::string> targets =
      held_out.empty() ? store.datasets() : held_out;
  GesOptions inner = ges;
  inner.execution = Execution::kSerial;
  std::map<std::string, std::vector<GesWeights>> weights;
  for (const auto& d : targets) {
    PortfolioRow row;
    row.held_out = d;
    const Portfolio portfolio = portfolio_learn(store, max_size, d, execution);
    row.members = portfolio.members;
    const CrossModelResult ens =
        evaluate_portfolio(store, portfolio, d, inner, execution);
    row.portfolio_test_error = ens.mean_test_error();
    row.portfolio_val_error = ens.mean_val_error();
    row.full_ensemble_test_error =
        cross_model_ensemble(store, d, {}, inner, execution).mean_test_error();
    weights[d] = ens.weights;
    out.rows.push_back(std::move(row));
  }
  out.family_weights = ensemble_weight_report(weights);
  return out;
}

}  // namespace tabeval
