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

// Bradley-Terry Elo ratings from per-dataset errors.
//
// Each dataset is a round-robin "tournament": for every pair of entries the
// lower error wins, equal errors tie. Ratings are the maximum-likelihood
// Bradley-Terry strengths on the Elo scale, where a gap g predicts a win
// probability of 1 / (1 + 10^(-g/400)). Ratings are mean-centred after the
// fit and can then be shifted so that a reference entry sits at 1000.

#ifndef TABEVAL_RATING_HPP_
#define TABEVAL_RATING_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tabeval/error.hpp"
#include "tabeval/eval_table.hpp"
#include "tabeval/parallel.hpp"

namespace tabeval {

inline constexpr double kEloScale = 400.0;
inline constexpr double kReferenceElo = 1000.0;
inline constexpr int kDefaultBootstrapRounds = 200;

struct PairwiseOutcome {
  std::string method_a;
  std::string method_b;
  std::string dataset_id;
  // 1 if a has the lower error, 0.5 on equal errors, 0 otherwise.
  double score_a = 0.0;
  bool operator==(const PairwiseOutcome&) const = default;
};

// One outcome per unordered entry pair per dataset, pairs in entry order.
std::vector<PairwiseOutcome> pairwise_outcomes(const ErrorMatrix& errors);
// Same, from a sparse table; throws InputError naming the first hole.
std::vector<PairwiseOutcome> pairwise_outcomes(const EvalTable& errors);

class DisconnectedGraphError : public InputError {
 public:
  explicit DisconnectedGraphError(std::vector<std::vector<std::string>> parts);
  const std::vector<std::vector<std::string>>& components() const {
    return components_;
  }

 private:
  std::vector<std::vector<std::string>> components_;
};

struct BradleyTerryOptions {
  // Stop when no rating moves by more than this many Elo points.
  double tol = 1e-10;
  int max_iter = 10000;
  // One virtual tie between every pair keeps the estimate finite when an
  // entry wins or loses every comparison.
  bool virtual_ties = true;
};

enum class Anchor { kMeanZero, kReference };

struct EloRating {
  std::map<std::string, double> ratings;
  Anchor anchor = Anchor::kMeanZero;
  std::optional<std::string> reference;
  // Offset added to the mean-zero ratings.
  double shift = 0.0;

  double at(const std::string& entry) const;
  bool operator==(const EloRating&) const = default;
};

// Mean-zero maximum-likelihood ratings. Throws DisconnectedGraphError if the
// comparison graph (real outcomes only) has more than one component and
// ConvergenceError if the iteration does not settle within max_iter.
EloRating fit_bradley_terry(std::span<const PairwiseOutcome> outcomes,
                            const BradleyTerryOptions& options = {});

// Shifts all ratings so that `reference` lands on `target`.
EloRating calibrate(const EloRating& rating, const std::string& reference,
                    double target = kReferenceElo);

// 1 / (1 + 10^(-gap/400)).
double expected_winrate(double gap);

struct EloInterval {
  double lower = 0.0;
  double upper = 0.0;
  bool operator==(const EloInterval&) const = default;
};

struct EloCI {
  std::map<std::string, EloInterval> intervals;
  int n_bootstrap = 0;
  std::uint64_t seed = 0;
  // Resamples discarded because their comparison graph was disconnected.
  int redraws = 0;
  bool operator==(const EloCI&) const = default;
};

struct BootstrapOptions {
  int n_bootstrap = kDefaultBootstrapRounds;
  std::uint64_t seed = 0;
  BradleyTerryOptions fit;
  Execution execution = Execution::kParallel;
};

struct EloEstimate {
  // Full-benchmark fit, calibrated to the reference.
  EloRating rating;
  // 2.5% / 97.5% quantiles of the mean-zero bootstrap ratings, shifted by
  // the full-benchmark calibration offset.
  EloCI ci;
};

// Resamples datasets with replacement n_bootstrap times. Round i draws from
// Xoshiro256(derive_seed(seed, i)); a disconnected resample is redrawn with
// derive_seed(derive_seed(seed, i), attempt). Throws ConvergenceError when
// more than half of the rounds needed a redraw.
EloEstimate bootstrap_elo(const ErrorMatrix& errors,
                          const std::string& reference,
                          const BootstrapOptions& options = {});

// Empirical quantile with linear interpolation between order statistics.
double quantile_linear(std::vector<double> values, double q);

}  // namespace tabeval

#endif  // TABEVAL_RATING_HPP_
