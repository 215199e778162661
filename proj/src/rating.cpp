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

#include "tabeval/rating.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include "tabeval/rng.hpp"

namespace tabeval {
namespace {

// d(expected score)/d(rating gap) scale: ln(10) / 400.
constexpr double kLogitPerElo = std::numbers::ln10 / kEloScale;
// Ratings this large only arise when the likelihood has no maximum.
constexpr double kDivergedElo = 1e6;

double LogSigmoid(double x) {
  return x >= 0 ? -std::log1p(std::exp(-x)) : x - std::log1p(std::exp(x));
}

double Sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

// Aggregated comparisons: score(i, j) is the total score of i against j,
// games(i, j) the number of comparisons between them.
struct PairTotals {
  std::size_t n = 0;
  std::vector<double> score;
  std::vector<double> games;

  explicit PairTotals(std::size_t entries)
      : n(entries), score(entries * entries, 0.0), games(entries * entries, 0.0) {}
  double& S(std::size_t i, std::size_t j) { return score[i * n + j]; }
  double& G(std::size_t i, std::size_t j) { return games[i * n + j]; }
  double S(std::size_t i, std::size_t j) const { return score[i * n + j]; }
  double G(std::size_t i, std::size_t j) const { return games[i * n + j]; }

  void Add(std::size_t a, std::size_t b, double score_a, double weight = 1.0) {
    S(a, b) += weight * score_a;
    S(b, a) += weight * (1.0 - score_a);
    G(a, b) += weight;
    G(b, a) += weight;
  }
};

std::vector<std::vector<std::size_t>> Components(const PairTotals& totals) {
  std::vector<std::size_t> parent(totals.n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t i = 0; i < totals.n; ++i) {
    for (std::size_t j = i + 1; j < totals.n; ++j) {
      if (totals.G(i, j) > 0) parent[find(i)] = find(j);
    }
  }
  std::map<std::size_t, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < totals.n; ++i) groups[find(i)].push_back(i);
  std::vector<std::vector<std::size_t>> out;
  for (auto& [root, members] : groups) out.push_back(std::move(members));
  std::sort(out.begin(), out.end());
  return out;
}

// The maximum-likelihood estimate is finite iff the digraph with an edge
// i -> j whenever i scored against j is strongly connected. Returns an entry
// that cannot reach, or be reached from, entry 0; n when none.
std::size_t SeparatedEntry(const PairTotals& t) {
  for (bool forward : {true, false}) {
    std::vector<bool> seen(t.n, false);
    std::vector<std::size_t> stack = {0};
    seen[0] = true;
    while (!stack.empty()) {
      const std::size_t i = stack.back();
      stack.pop_back();
      for (std::size_t j = 0; j < t.n; ++j) {
        const double score = forward ? t.S(i, j) : t.S(j, i);
        if (!seen[j] && score > 0) {
          seen[j] = true;
          stack.push_back(j);
        }
      }
    }
    for (std::size_t i = 0; i < t.n; ++i) {
      if (!seen[i]) return i;
    }
  }
  return t.n;
}

double LogLikelihood(const PairTotals& t, const std::vector<double>& r) {
  double ll = 0.0;
  for (std::size_t i = 0; i < t.n; ++i) {
    for (std::size_t j = i + 1; j < t.n; ++j) {
      if (t.G(i, j) == 0) continue;
      const double d = kLogitPerElo * (r[i] - r[j]);
      ll += t.S(i, j) * LogSigmoid(d) + t.S(j, i) * LogSigmoid(-d);
    }
  }
  return ll;
}

// Newton-Raphson with backtracking on the concave log-likelihood. Entry 0 is
// pinned at zero so the Hessian of the remaining ratings is negative
// definite on a connected graph; the result is mean-centred.
std::vector<double> FitTotals(const PairTotals& real,
                              const std::vector<std::string>& names,
                              const BradleyTerryOptions& options) {
  const std::size_t n = real.n;
  if (n == 0) return {};
  const auto parts = Components(real);
  if (parts.size() > 1) {
    std::vector<std::vector<std::string>> named;
    for (const auto& part : parts) {
      std::vector<std::string> members;
      for (std::size_t i : part) members.push_back(names[i]);
      named.push_back(std::move(members));
    }
    throw DisconnectedGraphError(std::move(named));
  }
  if (n == 1) return {0.0};

  PairTotals t = real;
  if (options.virtual_ties) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) t.Add(i, j, 0.5);
    }
  }

  if (const std::size_t sep = SeparatedEntry(t); sep < n) {
    throw ConvergenceError(
        "Bradley-Terry fit: the likelihood has no finite maximum because '" +
        names[sep] + "' is perfectly separated (it wins, or loses, every "
        "comparison against one side of the graph); enable virtual ties");
  }

  std::vector<double> r(n, 0.0);
  double ll = LogLikelihood(t, r);
  const auto m = static_cast<Eigen::Index>(n - 1);
  Eigen::VectorXd grad(m);
  Eigen::MatrixXd info(m, m);
  double residual = 0.0;
  for (int iter = 0; iter < options.max_iter; ++iter) {
    grad.setZero();
    info.setZero();
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const double games = t.G(i, j);
        if (games == 0) continue;
        const double p = Sigmoid(kLogitPerElo * (r[i] - r[j]));
        const double g = kLogitPerElo * (t.S(i, j) - games * p);
        const double h = kLogitPerElo * kLogitPerElo * games * p * (1.0 - p);
        const auto a = static_cast<Eigen::Index>(i) - 1;
        const auto b = static_cast<Eigen::Index>(j) - 1;
        if (a >= 0) {
          grad(a) += g;
          info(a, a) += h;
        }
        grad(b) -= g;
        info(b, b) += h;
        if (a >= 0) {
          info(a, b) -= h;
          info(b, a) -= h;
        }
      }
    }
    residual = grad.cwiseAbs().maxCoeff();
    Eigen::LDLT<Eigen::MatrixXd> ldlt(info);
    Eigen::VectorXd step = ldlt.solve(grad);
    if (ldlt.info() != Eigen::Success || !step.allFinite()) {
      std::ostringstream msg;
      msg << "Bradley-Terry fit: singular Hessian after " << iter
          << " iterations (gradient residual " << residual
          << "); the likelihood has no finite maximum";
      throw ConvergenceError(msg.str());
    }

    double scale = 1.0;
    std::vector<double> candidate(n);
    double candidate_ll = ll;
    for (int halving = 0; halving < 60; ++halving) {
      candidate[0] = 0.0;
      for (std::size_t i = 1; i < n; ++i) {
        candidate[i] = r[i] + scale * step(static_cast<Eigen::Index>(i) - 1);
      }
      candidate_ll = LogLikelihood(t, candidate);
      if (candidate_ll >= ll - 1e-12 * (1.0 + std::abs(ll))) break;
      scale *= 0.5;
    }
    double max_change = 0.0;
    double max_abs = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      max_change = std::max(max_change, std::abs(candidate[i] - r[i]));
      max_abs = std::max(max_abs, std::abs(candidate[i]));
    }
    r.swap(candidate);
    ll = candidate_ll;
    if (max_abs > kDivergedElo) {
      std::ostringstream msg;
      msg << "Bradley-Terry fit: ratings diverge (|rating| > " << kDivergedElo
          << " after " << iter + 1
          << " iterations); some entry wins or loses every comparison";
      throw ConvergenceError(msg.str());
    }
    if (max_change < options.tol) {
      const double mean =
          std::accumulate(r.begin(), r.end(), 0.0) / static_cast<double>(n);
      for (double& x : r) x -= mean;
      return r;
    }
  }
  std::ostringstream msg;
  msg << "Bradley-Terry fit did not converge in " << options.max_iter
      << " iterations (gradient residual " << residual << ")";
  throw ConvergenceError(msg.str());
}

std::string JoinComponents(const std::vector<std::vector<std::string>>& parts) {
  std::string out;
  for (const auto& part : parts) {
    out += out.empty() ? "{" : ", {";
    for (std::size_t i = 0; i < part.size(); ++i) {
      if (i) out += ", ";
      out += part[i];
    }
    out += "}";
  }
  return out;
}

}  // namespace

DisconnectedGraphError::DisconnectedGraphError(
    std::vector<std::vector<std::string>> parts)
    : InputError("comparison graph is disconnected; components: " +
                 JoinComponents(parts)),
      components_(std::move(parts)) {}

std::vector<PairwiseOutcome> pairwise_outcomes(const ErrorMatrix& errors) {
  std::vector<PairwiseOutcome> out;
  const auto& names = errors.entries();
  for (std::size_t d = 0; d < errors.n_datasets(); ++d) {
    for (std::size_t a = 0; a < names.size(); ++a) {
      for (std::size_t b = a + 1; b < names.size(); ++b) {
        const double ea = errors(a, d);
        const double eb = errors(b, d);
        const double score = ea < eb ? 1.0 : (ea == eb ? 0.5 : 0.0);
        out.push_back({names[a], names[b], errors.datasets()[d], score});
      }
    }
  }
  return out;
}

std::vector<PairwiseOutcome> pairwise_outcomes(const EvalTable& errors) {
  return pairwise_outcomes(ErrorMatrix::from_table(errors));
}

double EloRating::at(const std::string& entry) const {
  auto it = ratings.find(entry);
  if (it == ratings.end()) {
    throw ConfigError("no rating for '" + entry + "'");
  }
  return it->second;
}

EloRating fit_bradley_terry(std::span<const PairwiseOutcome> outcomes,
                            const BradleyTerryOptions& options) {
  std::map<std::string, std::size_t> index;
  for (const auto& o : outcomes) {
    index.emplace(o.method_a, 0);
    index.emplace(o.method_b, 0);
  }
  std::vector<std::string> names;
  for (auto& [name, i] : index) {
    i = names.size();
    names.push_back(name);
  }
  PairTotals totals(names.size());
  for (const auto& o : outcomes) {
    if (o.score_a != 0.0 && o.score_a != 0.5 && o.score_a != 1.0) {
      throw InputError("outcome score must be 0, 0.5 or 1");
    }
    if (o.method_a == o.method_b) {
      throw InputError("outcome compares '" + o.method_a + "' with itself");
    }
    totals.Add(index.at(o.method_a), index.at(o.method_b), o.score_a);
  }
  const std::vector<double> r = FitTotals(totals, names, options);
  EloRating out;
  for (std::size_t i = 0; i < names.size(); ++i) out.ratings[names[i]] = r[i];
  return out;
}

EloRating calibrate(const EloRating& rating, const std::string& reference,
                    double target) {
  const double delta = target - rating.at(reference);
  EloRating out = rating;
  for (auto& [name, value] : out.ratings) value += delta;
  out.anchor = Anchor::kReference;
  out.reference = reference;
  out.shift = rating.shift + delta;
  return out;
}

double expected_winrate(double gap) {
  return 1.0 / (1.0 + std::pow(10.0, -gap / kEloScale));
}

double quantile_linear(std::vector<double> values, double q) {
  if (values.empty()) throw InputError("quantile of an empty sample");
  std::sort(values.begin(), values.end());
  const double h = (static_cast<double>(values.size()) - 1.0) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

EloEstimate bootstrap_elo(const ErrorMatrix& errors,
                          const std::string& reference,
                          const BootstrapOptions& options) {
  const std::size_t n = errors.n_entries();
  const std::size_t n_datasets = errors.n_datasets();
  errors.index_of(reference);
  if (options.n_bootstrap < 0) throw InputError("n_bootstrap must be >= 0");

  // Per-dataset round-robin scores, reused by every resample.
  std::vector<PairTotals> per_dataset;
  per_dataset.reserve(n_datasets);
  for (std::size_t d = 0; d < n_datasets; ++d) {
    PairTotals t(n);
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = a + 1; b < n; ++b) {
        const double ea = errors(a, d);
        const double eb = errors(b, d);
        t.Add(a, b, ea < eb ? 1.0 : (ea == eb ? 0.5 : 0.0));
      }
    }
    per_dataset.push_back(std::move(t));
  }
  auto totals_for = [&](const std::vector<std::size_t>& counts) {
    PairTotals t(n);
    for (std::size_t d = 0; d < n_datasets; ++d) {
      if (counts[d] == 0) continue;
      const auto w = static_cast<double>(counts[d]);
      for (std::size_t k = 0; k < t.score.size(); ++k) {
        t.score[k] += w * per_dataset[d].score[k];
        t.games[k] += w * per_dataset[d].games[k];
      }
    }
    return t;
  };

  const std::vector<std::size_t> all(n_datasets, 1);
  const std::vector<double> point =
      FitTotals(totals_for(all), errors.entries(), options.fit);
  EloRating mean_zero;
  for (std::size_t i = 0; i < n; ++i) {
    mean_zero.ratings[errors.entries()[i]] = point[i];
  }

  EloEstimate out;
  out.rating = calibrate(mean_zero, reference);
  const double delta = out.rating.shift;
  out.ci.n_bootstrap = options.n_bootstrap;
  out.ci.seed = options.seed;

  const auto rounds = static_cast<std::size_t>(options.n_bootstrap);
  const int max_redraws = options.n_bootstrap / 2;
  std::vector<std::vector<double>> samples(rounds);
  std::vector<int> redraws(rounds, 0);
  for_each_index(rounds, options.execution, [&](std::size_t round) {
    const std::uint64_t round_seed = derive_seed(options.seed, round);
    for (int attempt = 0;; ++attempt) {
      Xoshiro256 rng(attempt == 0
                         ? round_seed
                         : derive_seed(round_seed,
                                       static_cast<std::uint64_t>(attempt)));
      std::vector<std::size_t> counts(n_datasets, 0);
      for (std::size_t k = 0; k < n_datasets; ++k) ++counts[rng.below(n_datasets)];
      try {
        samples[round] = FitTotals(totals_for(counts), errors.entries(),
                                   options.fit);
        return;
      } catch (const DisconnectedGraphError&) {
        if (++redraws[round] > max_redraws) {
          throw ConvergenceError(
              "bootstrap: too many disconnected resamples (more than half of "
              "the rounds)");
        }
      }
    }
  });
  out.ci.redraws = std::accumulate(redraws.begin(), redraws.end(), 0);
  if (out.ci.redraws > max_redraws) {
    throw ConvergenceError("bootstrap: " + std::to_string(out.ci.redraws) +
                           " of " + std::to_string(options.n_bootstrap) +
                           " resamples were disconnected and redrawn");
  }

  for (std::size_t i = 0; i < n; ++i) {
    const std::string& name = errors.entries()[i];
    EloInterval interval;
    if (rounds == 0) {
      interval.lower = interval.upper = out.rating.ratings.at(name);
    } else {
      std::vector<double> values(rounds);
      for (std::size_t b = 0; b < rounds; ++b) values[b] = samples[b][i];
      interval.lower = quantile_linear(values, 0.025) + delta;
      interval.upper = quantile_linear(std::move(values), 0.975) + delta;
    }
    out.ci.intervals[name] = interval;
  }
  return out;
}

}  // namespace tabeval
