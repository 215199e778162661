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

#include "tabeval/aggregate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/distributions/chi_squared.hpp>

#include "tabeval/error.hpp"

namespace tabeval {
namespace {

// Studentized range quantile at 0.95 divided by sqrt(2), for k = 2..50.
// k <= 10 are the classic published critical values.
constexpr double kNemenyiQ05[] = {
    1.960, 2.343, 2.569, 2.728, 2.850, 2.949, 3.031, 3.102, 3.164,  // 2-10
    3.219, 3.268, 3.313, 3.354, 3.391, 3.426, 3.458, 3.489, 3.517, 3.544,
    3.569, 3.593, 3.616, 3.637, 3.658, 3.678, 3.696, 3.714, 3.732, 3.749,
    3.765, 3.780, 3.795, 3.810, 3.824, 3.837, 3.850, 3.863, 3.876, 3.888,
    3.899, 3.911, 3.922, 3.933, 3.943, 3.954, 3.964, 3.973, 3.983, 3.992};

void RequireEntries(const ErrorMatrix& errors, std::size_t min_entries,
                    const char* what) {
  if (errors.n_entries() < min_entries) {
    throw InputError(std::string(what) + ": needs at least " +
                     std::to_string(min_entries) + " entries");
  }
  if (errors.n_datasets() == 0) {
    throw InputError(std::string(what) + ": no datasets");
  }
}

double Median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

std::map<std::string, double> normalized_scores(const ErrorMatrix& errors) {
  RequireEntries(errors, 2, "normalized_scores");
  const std::size_t k = errors.n_entries();
  std::vector<double> totals(k, 0.0);
  for (std::size_t d = 0; d < errors.n_datasets(); ++d) {
    const std::vector<double> col = errors.column(d);
    const double best = *std::min_element(col.begin(), col.end());
    const double median = Median(col);
    for (std::size_t e = 0; e < k; ++e) {
      if (median == best) {
        totals[e] += col[e] == best ? 1.0 : 0.0;
      } else {
        totals[e] += std::clamp((median - col[e]) / (median - best), 0.0, 1.0);
      }
    }
  }
  std::map<std::string, double> out;
  for (std::size_t e = 0; e < k; ++e) {
    out[errors.entries()[e]] =
        totals[e] / static_cast<double>(errors.n_datasets());
  }
  return out;
}

std::vector<double> rank_errors(std::span<const double> errors) {
  std::vector<std::size_t> order(errors.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return errors[a] < errors[b];
  });
  std::vector<double> ranks(errors.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j < order.size() && errors[order[j]] == errors[order[i]]) ++j;
    // Positions i+1 .. j share their average.
    const double rank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t t = i; t < j; ++t) ranks[order[t]] = rank;
    i = j;
  }
  return ranks;
}

std::vector<double> rank_matrix(const ErrorMatrix& errors) {
  const std::size_t k = errors.n_entries();
  const std::size_t n = errors.n_datasets();
  std::vector<double> out(k * n);
  for (std::size_t d = 0; d < n; ++d) {
    const std::vector<double> ranks = rank_errors(errors.column(d));
    for (std::size_t e = 0; e < k; ++e) out[e * n + d] = ranks[e];
  }
  return out;
}

std::map<std::string, double> average_ranks(const ErrorMatrix& errors) {
  RequireEntries(errors, 1, "average_ranks");
  const std::size_t n = errors.n_datasets();
  const std::vector<double> ranks = rank_matrix(errors);
  std::map<std::string, double> out;
  for (std::size_t e = 0; e < errors.n_entries(); ++e) {
    double total = 0.0;
    for (std::size_t d = 0; d < n; ++d) total += ranks[e * n + d];
    out[errors.entries()[e]] = total / static_cast<double>(n);
  }
  return out;
}

double harmonic_mean_rank(std::span<const double> ranks) {
  if (ranks.empty()) throw InputError("harmonic_mean_rank: no ranks");
  double inverse_sum = 0.0;
  for (double r : ranks) {
    if (!(r >= 1.0)) throw InputError("harmonic_mean_rank: rank below 1");
    inverse_sum += 1.0 / r;
  }
  return static_cast<double>(ranks.size()) / inverse_sum;
}

std::map<std::string, double> harmonic_mean_ranks(const ErrorMatrix& errors) {
  RequireEntries(errors, 1, "harmonic_mean_ranks");
  const std::size_t n = errors.n_datasets();
  const std::vector<double> ranks = rank_matrix(errors);
  std::map<std::string, double> out;
  for (std::size_t e = 0; e < errors.n_entries(); ++e) {
    out[errors.entries()[e]] = harmonic_mean_rank(
        std::span<const double>(ranks.data() + e * n, n));
  }
  return out;
}

std::map<std::string, double> improvability(const ErrorMatrix& errors) {
  RequireEntries(errors, 1, "improvability");
  const std::size_t k = errors.n_entries();
  std::vector<double> totals(k, 0.0);
  for (std::size_t d = 0; d < errors.n_datasets(); ++d) {
    const std::vector<double> col = errors.column(d);
    const double best = *std::min_element(col.begin(), col.end());
    for (std::size_t e = 0; e < k; ++e) {
      if (col[e] < 0) throw InputError("improvability: negative error");
      if (col[e] > 0) totals[e] += (col[e] - best) / col[e] * 100.0;
    }
  }
  std::map<std::string, double> out;
  for (std::size_t e = 0; e < k; ++e) {
    out[errors.entries()[e]] =
        totals[e] / static_cast<double>(errors.n_datasets());
  }
  return out;
}

std::map<std::string, double> champion_counts(const ErrorMatrix& errors) {
  RequireEntries(errors, 1, "champion_counts");
  std::map<std::string, double> out;
  for (const auto& name : errors.entries()) out[name] = 0.0;
  for (std::size_t d = 0; d < errors.n_datasets(); ++d) {
    const std::vector<double> col = errors.column(d);
    const double best = *std::min_element(col.begin(), col.end());
    const auto winners = std::count(col.begin(), col.end(), best);
    for (std::size_t e = 0; e < col.size(); ++e) {
      if (col[e] == best) {
        out[errors.entries()[e]] += 1.0 / static_cast<double>(winners);
      }
    }
  }
  return out;
}

WinrateMatrix winrate_matrix(const ErrorMatrix& errors) {
  RequireEntries(errors, 1, "winrate_matrix");
  const std::size_t k = errors.n_entries();
  const auto n = static_cast<double>(errors.n_datasets());
  WinrateMatrix out{errors.entries(), std::vector<double>(k * k, 0.0)};
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = 0; b < k; ++b) {
      if (a == b) {
        out.values[a * k + b] = 0.5;
        continue;
      }
      double wins = 0.0;
      for (std::size_t d = 0; d < errors.n_datasets(); ++d) {
        const double ea = errors(a, d);
        const double eb = errors(b, d);
        wins += ea < eb ? 1.0 : (ea == eb ? 0.5 : 0.0);
      }
      out.values[a * k + b] = wins / n;
    }
  }
  return out;
}

double nemenyi_q(int k, double alpha) {
  if (alpha != 0.05) {
    throw UnsupportedError("Nemenyi critical values are tabulated for alpha = "
                           "0.05 only");
  }
  if (k < 2 || k > 50) {
    throw UnsupportedError("Nemenyi critical values cover 2..50 entries, got " +
                           std::to_string(k));
  }
  return kNemenyiQ05[k - 2];
}

CriticalDifference friedman_nemenyi(const ErrorMatrix& errors, double alpha) {
  const std::size_t k = errors.n_entries();
  if (k < 3) {
    throw UnsupportedError(
        "critical-difference analysis needs at least 3 entries, got " +
        std::to_string(k));
  }
  if (errors.n_datasets() < 2) {
    throw InputError("critical-difference analysis needs at least 2 datasets");
  }
  CriticalDifference out;
  out.entries = errors.entries();
  out.n_datasets = static_cast<int>(errors.n_datasets());
  out.alpha = alpha;
  const auto ranks = average_ranks(errors);
  for (const auto& name : out.entries) out.average_ranks.push_back(ranks.at(name));

  const auto kd = static_cast<double>(k);
  const auto nd = static_cast<double>(out.n_datasets);
  double sum_sq = 0.0;
  for (double r : out.average_ranks) sum_sq += r * r;
  out.friedman_statistic =
      12.0 * nd / (kd * (kd + 1.0)) * (sum_sq - kd * (kd + 1.0) * (kd + 1.0) / 4.0);
  // Rounding can push an all-ties statistic a hair below zero.
  out.friedman_statistic = std::max(0.0, out.friedman_statistic);
  boost::math::chi_squared dist(kd - 1.0);
  out.p_value = boost::math::cdf(boost::math::complement(dist, out.friedman_statistic));
  out.critical_distance =
      nemenyi_q(static_cast<int>(k), alpha) * std::sqrt(kd * (kd + 1.0) / (6.0 * nd));

  // Transitive closure over pairs closer than the critical distance.
  std::vector<std::size_t> parent(k);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = a + 1; b < k; ++b) {
      if (std::abs(out.average_ranks[a] - out.average_ranks[b]) <
          out.critical_distance) {
        parent[find(a)] = find(b);
      }
    }
  }
  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return out.average_ranks[a] < out.average_ranks[b];
  });
  std::map<std::size_t, std::size_t> group_of_root;
  for (std::size_t i : order) {
    const std::size_t root = find(i);
    auto [it, inserted] = group_of_root.emplace(root, out.groups.size());
    if (inserted) out.groups.emplace_back();
    out.groups[it->second].push_back(out.entries[i]);
  }
  return out;
}

}  // namespace tabeval
