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

// Analyses built on top of regime evaluation: tuning trajectories, ensembles
// across model families, ensemble-weight reports and zeroshot portfolios.
//
// Cross-model candidates are identified as "method/config".

#ifndef TABEVAL_SIMULATE_HPP_
#define TABEVAL_SIMULATE_HPP_

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tabeval/ensemble.hpp"
#include "tabeval/eval_table.hpp"
#include "tabeval/parallel.hpp"
#include "tabeval/rating.hpp"
#include "tabeval/result_store.hpp"

namespace tabeval {

inline constexpr int kDefaultTrajectorySamples = 20;
inline constexpr int kDefaultPortfolioSize = 200;

std::string candidate_id(const std::string& method, const std::string& config);
// Method part of a candidate id (everything before the last '/').
std::string candidate_family(const std::string& candidate);

struct TrajectoryPoint {
  std::string method;
  int n_configs = 0;
  // Per dataset, averaged over splits and then over draws.
  std::map<std::string, double> test_error;
  std::map<std::string, double> val_error;
  // The artifact carries no timing, so this stays empty unless a caller
  // attaches it.
  std::optional<double> tuning_time;
  // False for the point that uses every config once.
  bool sampled = true;
  bool operator==(const TrajectoryPoint&) const = default;
};

struct TrajectoryOptions {
  std::vector<int> grid;
  int n_samples = kDefaultTrajectorySamples;
  std::uint64_t seed = 0;
  GesOptions ges;
  Execution execution = Execution::kParallel;
};

// For each n in the grid, draws n configs without replacement n_samples
// times (draw j of point n uses Xoshiro256(derive_seed(derive_seed(seed, n),
// j))), runs GES over the drawn configs on every dataset and split, and
// averages. A grid point equal to the number of configs uses all of them
// once, reproducing the tuned+ensembled regime exactly.
std::vector<TrajectoryPoint> tuning_trajectory(const ResultStore& store,
                                               const std::string& method,
                                               const TrajectoryOptions& options);

// "GBM (n=5)".
std::string trajectory_label(const TrajectoryPoint& point);

// Table of trajectory points keyed by trajectory_label(); test errors, or
// validation errors when `validation` is set.
EvalTable trajectory_table(std::span<const TrajectoryPoint> points,
                           bool validation);

// Elo on validation minus Elo on test, per entry. Throws InputError if the
// two ratings do not cover the same entries.
std::map<std::string, double> overfitting_gap(const EloRating& test,
                                              const EloRating& validation);

struct CrossModelResult {
  std::string dataset_id;
  std::vector<SplitId> splits;
  std::vector<double> test_errors;
  std::vector<double> val_errors;
  std::vector<GesWeights> weights;

  double mean_test_error() const;
  double mean_val_error() const;
};

// (method, config) -> include in the pool. An empty filter keeps everything.
using CandidateFilter =
    std::function<bool(const std::string& method, const std::string& config)>;

// GES over the union of all selected (method, config) validation predictions
// on every outer split of the dataset.
CrossModelResult cross_model_ensemble(
    const ResultStore& store, const std::string& dataset_id,
    const CandidateFilter& filter = {}, const GesOptions& ges = {},
    Execution split_execution = Execution::kParallel);

// Average weight per method family: per split the candidate weights are
// summed by family, averaged over splits, then over datasets.
std::map<std::string, double> ensemble_weight_report(
    const std::map<std::string, std::vector<GesWeights>>& weights_by_dataset);

struct Portfolio {
  std::vector<std::string> members;
  int max_size = 0;
  std::vector<std::string> training_datasets;
  // Greedy objective after each addition.
  std::vector<double> objective;
};

// Greedy forward selection. Each step adds the candidate that minimises the
// mean over datasets of the best (lowest) normalised error among the
// portfolio members; errors are min-max normalised per dataset over all
// candidates. Ties go to the smallest candidate id. `candidate_errors` rows
// are candidates, columns training datasets.
Portfolio greedy_portfolio(const ErrorMatrix& candidate_errors, int max_size);

// Mean test error over outer splits of every candidate on every dataset it
// fully covers, candidates x datasets (holes omitted).
EvalTable candidate_errors(const ResultStore& store,
                           Execution execution = Execution::kParallel);

// Learns a portfolio on every dataset except `held_out`. Candidates that do
// not cover all training datasets are excluded.
Portfolio portfolio_learn(const ResultStore& store, int max_size,
                          const std::string& held_out,
                          Execution execution = Execution::kParallel);

// Cross-model ensemble on `held_out` restricted to the portfolio members.
CrossModelResult evaluate_portfolio(const ResultStore& store,
                                    const Portfolio& portfolio,
                                    const std::string& held_out,
                                    const GesOptions& ges = {},
                                    Execution split_execution = Execution::kParallel);

}  // namespace tabeval

#endif  // TABEVAL_SIMULATE_HPP_
