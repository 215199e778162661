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

// End-to-end analyses over a store: regime evaluation of every method,
// leaderboards, trajectories and portfolio studies. The CLI is a thin layer
// over these functions.

#ifndef TABEVAL_PIPELINE_HPP_
#define TABEVAL_PIPELINE_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "tabeval/aggregate.hpp"
#include "tabeval/ensemble.hpp"
#include "tabeval/eval_table.hpp"
#include "tabeval/rating.hpp"
#include "tabeval/result_store.hpp"
#include "tabeval/simulate.hpp"

namespace tabeval {

inline constexpr std::string_view kDefaultReference = "RandomForest/default";

struct EvaluationOptions {
  std::vector<Regime> regimes = {std::begin(kAllRegimes), std::end(kAllRegimes)};
  GesOptions ges;
  Execution execution = Execution::kParallel;
};

struct StoreEvaluation {
  // Entry label -> dataset -> mean error over outer splits.
  EvalTable test;
  EvalTable val;
  // Tuned+ensembled weights per entry and dataset (one per split).
  std::map<std::string, std::map<std::string, std::vector<GesWeights>>> ensembles;
};

// Runs evaluate_regimes for every (dataset, method) pair in the store. Pairs
// are distributed over threads under kParallel.
StoreEvaluation evaluate_store(const ResultStore& store,
                               const EvaluationOptions& options = {});

// Keeps datasets matching a filter: a comma list of dataset ids, or
// "type:binary" / "type:multiclass" / "type:regression". Empty keeps all.
ResultStore filter_datasets(const ResultStore& store, const std::string& filter);

struct LeaderboardRow {
  std::string entry;
  double elo = 0.0;
  double elo_lower = 0.0;
  double elo_upper = 0.0;
  double normalized_score = 0.0;
  double average_rank = 0.0;
  double harmonic_mean_rank = 0.0;
  double wins = 0.0;
  double improvability = 0.0;
  std::size_t imputed_count = 0;
  bool operator==(const LeaderboardRow&) const = default;
};

struct Leaderboard {
  // Sorted by Elo descending, then entry label.
  std::vector<LeaderboardRow> rows;
  std::string reference;
  int n_bootstrap = 0;
  std::uint64_t seed = 0;
  std::vector<std::string> datasets;
  // The table the rows were computed from (after imputation).
  EvalTable errors;
};

struct LeaderboardOptions {
  // METHOD/CONFIG or an entry label.
  std::string reference = std::string(kDefaultReference);
  bool impute = false;
  BootstrapOptions bootstrap;
};

// Rates every entry of `errors`. Throws ConfigError if the reference is
// absent, InputError on coverage holes when imputation is off.
Leaderboard build_leaderboard(const EvalTable& errors,
                              const LeaderboardOptions& options);

struct TrajectoryReport {
  std::vector<TrajectoryPoint> points;
  std::string reference;
  // Calibrated to the reference's test and validation performance.
  EloRating test_elo;
  EloRating val_elo;
  std::map<std::string, double> overfitting_gap;
};

struct TrajectoryRequest {
  std::vector<std::string> methods;  // empty: every method
  // Grid values; 0 stands for "all configs of the method".
  std::vector<int> grid;
  int n_samples = kDefaultTrajectorySamples;
  std::uint64_t seed = 0;
  std::string reference = std::string(kDefaultReference);
  GesOptions ges;
  BradleyTerryOptions fit;
  Execution execution = Execution::kParallel;
};

TrajectoryReport build_trajectory_report(const ResultStore& store,
                                         const TrajectoryRequest& request);

struct PortfolioRow {
  std::string held_out;
  std::vector<std::string> members;
  double portfolio_test_error = 0.0;
  double portfolio_val_error = 0.0;
  // All candidates of the store ensembled on the held-out dataset.
  double full_ensemble_test_error = 0.0;
};

struct PortfolioReport {
  int max_size = 0;
  int ges_steps = 0;
  std::vector<PortfolioRow> rows;
  // Average family weight of the portfolio ensembles across held-out sets.
  std::map<std::string, double> family_weights;
};

// Leave-one-dataset-out portfolio study over `held_out` (empty: every
// dataset).
PortfolioReport build_portfolio_report(const ResultStore& store, int max_size,
                                       const std::vector<std::string>& held_out,
                                       const GesOptions& ges = {},
                                       Execution execution = Execution::kParallel);

}  // namespace tabeval

#endif  // TABEVAL_PIPELINE_HPP_
