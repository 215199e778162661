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

// Auxiliary leaderboard metrics and significance analysis. All functions
// take a dense entries x datasets error matrix (lower error is better).

#ifndef TABEVAL_AGGREGATE_HPP_
#define TABEVAL_AGGREGATE_HPP_

#include <map>
#include <span>
#include <string>
#include <vector>

#include "tabeval/eval_table.hpp"

namespace tabeval {

// Per dataset: best error -> 1, median error -> 0, linear in between,
// clipped to [0, 1]; then averaged over datasets. When best equals median,
// entries at the best error score 1 and the rest 0.
std::map<std::string, double> normalized_scores(const ErrorMatrix& errors);

// 1-based ranks of one dataset's errors; ties share the average position.
std::vector<double> rank_errors(std::span<const double> errors);

// Per-dataset ranks, entries x datasets, row-major.
std::vector<double> rank_matrix(const ErrorMatrix& errors);

std::map<std::string, double> average_ranks(const ErrorMatrix& errors);

// N / sum(1 / rank_i).
double harmonic_mean_rank(std::span<const double> ranks);

std::map<std::string, double> harmonic_mean_ranks(const ErrorMatrix& errors);

// Mean over datasets of (err - best) / err * 100, taken as 0 when err = 0.
std::map<std::string, double> improvability(const ErrorMatrix& errors);

// One win per dataset, split evenly among the entries tied at the minimum.
std::map<std::string, double> champion_counts(const ErrorMatrix& errors);

struct WinrateMatrix {
  std::vector<std::string> entries;
  // values[a * n + b]: share of datasets where a beats b (ties count 1/2).
  std::vector<double> values;

  double operator()(std::size_t a, std::size_t b) const {
    return values[a * entries.size() + b];
  }
};

WinrateMatrix winrate_matrix(const ErrorMatrix& errors);

// Nemenyi q_alpha for k entries (2 <= k <= 50); only alpha = 0.05 is
// tabulated. Throws UnsupportedError otherwise.
double nemenyi_q(int k, double alpha = 0.05);

struct CriticalDifference {
  std::vector<std::string> entries;
  std::vector<double> average_ranks;
  int n_datasets = 0;
  double alpha = 0.05;
  double friedman_statistic = 0.0;
  double p_value = 1.0;
  double critical_distance = 0.0;
  // Connected components of the "rank gap below CD" relation; each group is
  // ordered by average rank, groups by their best member.
  std::vector<std::vector<std::string>> groups;
};

// Friedman chi-square on average ranks plus the Nemenyi critical distance.
// Requires k >= 3 entries (UnsupportedError) and N >= 2 datasets.
CriticalDifference friedman_nemenyi(const ErrorMatrix& errors,
                                    double alpha = 0.05);

}  // namespace tabeval

#endif  // TABEVAL_AGGREGATE_HPP_
