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

// Independent reference implementations used to compute expected values in
// tests. Each one favours the most direct formulation over speed and shares
// no code with the library.

#ifndef TABEVAL_TESTS_ORACLES_HPP_
#define TABEVAL_TESTS_ORACLES_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace oracle {

// Counts positive/negative pairs directly: wins plus half the ties.
inline double auc_pairs(const std::vector<double>& scores,
                        const std::vector<double>& labels) {
  double wins = 0.0;
  double pairs = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (labels[i] != 1.0) continue;
    for (std::size_t j = 0; j < scores.size(); ++j) {
      if (labels[j] != 0.0) continue;
      pairs += 1.0;
      if (scores[i] > scores[j]) wins += 1.0;
      else if (scores[i] == scores[j]) wins += 0.5;
    }
  }
  return wins / pairs;
}

// probs[i][c], labels are class indices.
inline double log_loss(const std::vector<std::vector<double>>& probs,
                       const std::vector<double>& labels) {
  const double eps = 1e-15;
  double total = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    double p = probs[i][static_cast<std::size_t>(labels[i])];
    p = std::min(std::max(p, eps), 1.0 - eps);
    total -= std::log(p);
  }
  return total / static_cast<double>(probs.size());
}

inline double rmse(const std::vector<double>& preds,
                   const std::vector<double>& targets) {
  double total = 0.0;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    total += (preds[i] - targets[i]) * (preds[i] - targets[i]);
  }
  return std::sqrt(total / static_cast<double>(preds.size()));
}

// Binary GES over positive-class score vectors, scored by 1 - AUC. Each
// round rebuilds every candidate mixture from the full selection list.
struct GesTrace {
  std::vector<std::size_t> picks;
  std::vector<double> errors;
};

inline GesTrace ges_binary(const std::vector<std::vector<double>>& candidates,
                           const std::vector<double>& labels, int steps) {
  GesTrace trace;
  const std::size_t n = labels.size();
  for (int round = 1; round <= steps; ++round) {
    std::size_t best = 0;
    double best_err = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < candidates.size(); ++c) {
      std::vector<double> mix(n, 0.0);
      for (std::size_t pick : trace.picks) {
        for (std::size_t i = 0; i < n; ++i) mix[i] += candidates[pick][i];
      }
      for (std::size_t i = 0; i < n; ++i) {
        mix[i] = (mix[i] + candidates[c][i]) / static_cast<double>(round);
      }
      const double err = 1.0 - auc_pairs(mix, labels);
      if (err < best_err) {
        best_err = err;
        best = c;
      }
    }
    trace.picks.push_back(best);
    trace.errors.push_back(best_err);
  }
  return trace;
}

// Bradley-Terry log-likelihood in Elo units. games holds (a, b, score_a).
struct Game {
  std::size_t a;
  std::size_t b;
  double score_a;
};

inline double bt_loglik(const std::vector<Game>& games,
                        const std::vector<double>& elo) {
  const double c = std::log(10.0) / 400.0;
  double total = 0.0;
  for (const auto& g : games) {
    const double p = 1.0 / (1.0 + std::exp(-c * (elo[g.a] - elo[g.b])));
    total += g.score_a * std::log(p) + (1.0 - g.score_a) * std::log(1.0 - p);
  }
  return total;
}

// Central finite-difference gradient of bt_loglik.
inline std::vector<double> bt_gradient_fd(const std::vector<Game>& games,
                                          std::vector<double> elo,
                                          double h = 1e-3) {
  std::vector<double> grad(elo.size());
  for (std::size_t i = 0; i < elo.size(); ++i) {
    const double keep = elo[i];
    elo[i] = keep + h;
    const double up = bt_loglik(games, elo);
    elo[i] = keep - h;
    const double down = bt_loglik(games, elo);
    elo[i] = keep;
    grad[i] = (up - down) / (2.0 * h);
  }
  return grad;
}

// Average ranks (1 = lowest value, ties share the mean position) by sorting.
inline std::vector<double> ranks(const std::vector<double>& values) {
  std::vector<std::size_t> order(values.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t x, std::size_t y) { return values[x] < values[y]; });
  std::vector<double> out(values.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    const double mean = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t t = i; t <= j; ++t) out[order[t]] = mean;
    i = j + 1;
  }
  return out;
}

// Greedy portfolio by brute force: at every step evaluates the full
// objective of (members + candidate) from scratch. errors[c][d].
struct PortfolioTrace {
  std::vector<std::size_t> members;
  std::vector<double> objective;
};

inline PortfolioTrace portfolio_bruteforce(
    const std::vector<std::vector<double>>& errors, std::size_t max_size) {
  const std::size_t k = errors.size();
  const std::size_t n = errors.front().size();
  std::vector<std::vector<double>> norm(k, std::vector<double>(n));
  for (std::size_t d = 0; d < n; ++d) {
    double lo = errors[0][d];
    double hi = errors[0][d];
    for (std::size_t c = 0; c < k; ++c) {
      lo = std::min(lo, errors[c][d]);
      hi = std::max(hi, errors[c][d]);
    }
    for (std::size_t c = 0; c < k; ++c) {
      norm[c][d] = hi > lo ? (errors[c][d] - lo) / (hi - lo) : 0.0;
    }
  }
  auto objective = [&](const std::vector<std::size_t>& set) {
    double total = 0.0;
    for (std::size_t d = 0; d < n; ++d) {
      double best = 1.0;
      for (std::size_t c : set) best = std::min(best, norm[c][d]);
      total += best;
    }
    return total / static_cast<double>(n);
  };
  PortfolioTrace trace;
  for (std::size_t step = 0; step < std::min(max_size, k); ++step) {
    std::size_t pick = k;
    double pick_obj = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < k; ++c) {
      if (std::find(trace.members.begin(), trace.members.end(), c) !=
          trace.members.end()) {
        continue;
      }
      auto trial = trace.members;
      trial.push_back(c);
      const double obj = objective(trial);
      if (obj < pick_obj) {
        pick_obj = obj;
        pick = c;
      }
    }
    trace.members.push_back(pick);
    trace.objective.push_back(pick_obj);
  }
  return trace;
}

}  // namespace oracle

#endif  // TABEVAL_TESTS_ORACLES_HPP_
