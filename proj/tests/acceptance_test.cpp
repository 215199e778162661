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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails. Expected values come from the closed forms and the
// oracles in oracles.hpp.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "support.hpp"
#include "tabeval/aggregate.hpp"
#include "tabeval/ensemble.hpp"
#include "tabeval/metrics.hpp"
#include "tabeval/pipeline.hpp"
#include "tabeval/rating.hpp"
#include "tabeval/report.hpp"
#include "tabeval/simulate.hpp"
#include "tabeval/synth.hpp"

namespace {

using namespace tabeval;
using Clock = std::chrono::steady_clock;

struct Verdict {
  bool ok = true;
  std::string detail;
  void check(bool cond, const std::string& what) {
    if (!cond && ok) detail = what;
    ok = ok && cond;
  }
};

double Seconds(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string Num(double x) {
  std::ostringstream s;
  s.precision(10);
  s << x;
  return s.str();
}

ErrorMatrix RandomMatrix(std::mt19937_64& gen, std::size_t k, std::size_t n,
                         bool ties) {
  std::uniform_real_distribution<double> u(0.01, 1.0);
  std::uniform_int_distribution<int> level(1, 4);
  std::vector<std::string> entries, datasets;
  for (std::size_t e = 0; e < k; ++e) entries.push_back("m" + std::to_string(e));
  for (std::size_t d = 0; d < n; ++d) datasets.push_back("d" + std::to_string(d));
  std::vector<double> errors(k * n);
  for (auto& e : errors) e = ties ? level(gen) / 4.0 : u(gen);
  return ErrorMatrix(entries, datasets, errors);
}

bool TieSizesArePowersOfTwo(const ErrorMatrix& m) {
  for (std::size_t d = 0; d < m.n_datasets(); ++d) {
    const auto col = m.column(d);
    const double best = *std::min_element(col.begin(), col.end());
    const auto w = std::count(col.begin(), col.end(), best);
    if ((w & (w - 1)) != 0) return false;
  }
  return true;
}

// 30 datasets, qualities 0.9 / 0.5 / 0.1; only the best method is tuned.
ResultStore MakePlantedStore() {
  SynthPlan plan;
  plan.seed = 20261015;
  plan.n_datasets = 30;
  plan.methods = {{"High", 0.9, 5}, {"Mid", 0.5, 1}, {"Low", 0.1, 1}};
  return generate(plan, Execution::kSerial);
}

StoreEvaluation EvaluateSerial(const ResultStore& store) {
  EvaluationOptions opts;
  opts.execution = Execution::kSerial;
  opts.ges.execution = Execution::kSerial;
  return evaluate_store(store, opts);
}

const ResultStore& PlantedStore() {
  static const ResultStore store = MakePlantedStore();
  return store;
}

const StoreEvaluation& PlantedEvaluation() {
  static const StoreEvaluation eval = EvaluateSerial(PlantedStore());
  return eval;
}

LeaderboardOptions PlantedBoardOptions(std::uint64_t seed) {
  LeaderboardOptions opts;
  opts.reference = "Mid/default";
  opts.bootstrap.seed = seed;
  opts.bootstrap.execution = Execution::kSerial;
  return opts;
}

Verdict EloClosedForm() {
  Verdict v;
  const auto start = Clock::now();
  std::vector<PairwiseOutcome> games;
  for (int d = 0; d < 11; ++d) {
    games.push_back({"A", "B", "d" + std::to_string(d), d < 10 ? 1.0 : 0.0});
  }
  BradleyTerryOptions opts;
  opts.virtual_ties = false;
  const auto r = fit_bradley_terry(games, opts);
  const double gap = r.at("A") - r.at("B");
  const double secs = Seconds(start);
  v.check(std::abs(gap - 400.0) <= 0.5, "gap " + Num(gap));
  v.check(secs < 1.0, "took " + Num(secs) + " s");
  v.detail = v.ok ? "gap " + Num(gap) + " Elo in " + Num(secs) + " s" : v.detail;
  return v;
}

Verdict WinrateClosedForm() {
  Verdict v;
  const double w = expected_winrate(400.0);
  v.check(std::abs(w - 10.0 / 11.0) <= 1e-12, "winrate(400) = " + Num(w));
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double g = -2000.0 + 4000.0 * i / 999.0;
    worst = std::max(worst, std::abs(expected_winrate(g) + expected_winrate(-g) - 1.0));
  }
  v.check(worst <= 1e-12, "antisymmetry residual " + Num(worst));
  if (v.ok) v.detail = "antisymmetry residual " + Num(worst);
  return v;
}

Verdict Stationarity() {
  Verdict v;
  std::mt19937_64 gen(101);
  std::uniform_int_distribution<int> outcome(0, 2);
  double worst = 0.0;
  for (int t = 0; t < 10; ++t) {
    std::vector<PairwiseOutcome> outcomes;
    std::vector<oracle::Game> games;
    for (int d = 0; d < 8; ++d) {
      for (std::size_t a = 0; a < 5; ++a) {
        for (std::size_t b = a + 1; b < 5; ++b) {
          const double s = outcome(gen) / 2.0;
          outcomes.push_back({"m" + std::to_string(a), "m" + std::to_string(b),
                              "d" + std::to_string(d), s});
          games.push_back({a, b, s});
        }
      }
    }
    // The fit maximises the likelihood including one virtual tie per pair.
    for (std::size_t a = 0; a < 5; ++a) {
      for (std::size_t b = a + 1; b < 5; ++b) games.push_back({a, b, 0.5});
    }
    const auto r = fit_bradley_terry(outcomes);
    std::vector<double> elo;
    for (std::size_t i = 0; i < 5; ++i) elo.push_back(r.at("m" + std::to_string(i)));
    for (double g : oracle::bt_gradient_fd(games, elo)) worst = std::max(worst, std::abs(g));
  }
  v.check(worst < 1e-6, "max gradient " + Num(worst));
  if (v.ok) v.detail = "max |gradient| " + Num(worst);
  return v;
}

Verdict AucOracle() {
  Verdict v;
  std::mt19937_64 gen(102);
  std::uniform_int_distribution<std::size_t> size(2, 50);
  double worst = 0.0;
  std::vector<double> scores, labels;
  for (int t = 0; t < 200; ++t) {
    testing_support::random_binary_instance(gen, size(gen), scores, labels);
    worst = std::max(worst, std::abs(roc_auc(scores, labels) -
                                     oracle::auc_pairs(scores, labels)));
  }
  v.check(worst <= 1e-12, "max difference " + Num(worst));
  if (v.ok) v.detail = "max difference " + Num(worst);
  return v;
}

Verdict GesChecks() {
  Verdict v;
  const auto start = Clock::now();
  std::mt19937_64 gen(103);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> coin(0, 1);
  const TaskSpec task = testing_support::binary_task();
  auto instance = [&](std::size_t k, std::size_t n,
                      std::vector<std::vector<double>>& scores,
                      std::vector<Predictions>& blocks, std::vector<double>& y) {
    y.assign(n, 0.0);
    for (auto& l : y) l = coin(gen);
    y[0] = 0;
    y[1] = 1;
    scores.assign(k, std::vector<double>(n));
    blocks.clear();
    for (std::size_t c = 0; c < k; ++c) {
      for (std::size_t i = 0; i < n; ++i) {
        scores[c][i] = std::clamp(0.4 * y[i] + 0.3 + 0.8 * (u(gen) - 0.5), 0.0, 1.0);
      }
      blocks.push_back(testing_support::binary_probs(scores[c]));
    }
  };
  auto pool_of = [](const std::vector<Predictions>& blocks) {
    PredictionPool pool;
    for (std::size_t c = 0; c < blocks.size(); ++c) {
      pool.emplace("c" + std::to_string(c), std::cref(blocks[c]));
    }
    return pool;
  };
  std::vector<std::vector<double>> scores;
  std::vector<Predictions> blocks;
  std::vector<double> y;
  for (int t = 0; t < 50; ++t) {
    instance(3 + t % 6, 40, scores, blocks, y);
    const auto w = ges_fit(pool_of(blocks), y, task);
    std::size_t best = 0;
    double best_err = 2.0;
    for (std::size_t c = 0; c < scores.size(); ++c) {
      const double e = 1.0 - oracle::auc_pairs(scores[c], y);
      if (e < best_err) {
        best_err = e;
        best = c;
      }
    }
    v.check(w.trace.front().candidate == "c" + std::to_string(best),
            "round-1 choice differs on instance " + std::to_string(t));
    double total = 0.0;
    for (const auto& [id, weight] : w.weights) total += weight;
    v.check(std::abs(total - 1.0) <= 1e-9, "weights sum " + Num(total));
  }
  for (int t = 0; t < 10; ++t) {
    instance(5, 60, scores, blocks, y);
    const auto w = ges_fit(pool_of(blocks), y, task, {40, false, Execution::kSerial});
    const auto ref = oracle::ges_binary(scores, y, 40);
    for (std::size_t r = 0; r < 40; ++r) {
      v.check(w.trace[r].candidate == "c" + std::to_string(ref.picks[r]) &&
                  std::abs(w.trace[r].val_error - ref.errors[r]) <= 1e-12,
              "trace differs at round " + std::to_string(r + 1));
    }
  }
  const double secs = Seconds(start);
  v.check(secs < 5.0, "took " + Num(secs) + " s");
  if (v.ok) v.detail = "50 round-1 checks, 10 full traces in " + Num(secs) + " s";
  return v;
}

Verdict AggregationProperties() {
  Verdict v;
  std::mt19937_64 gen(104);
  for (int t = 0; t < 100; ++t) {
    const std::size_t k = 3 + t % 5, n = 1 + t % 9;
    const ErrorMatrix m = RandomMatrix(gen, k, n, t % 3 == 0);
    const auto champs = champion_counts(m);
    double champ_total = 0.0;
    for (const auto& [e, c] : champs) champ_total += c;
    // Shares of k-way ties are exact only when k is a power of two; other
    // tie sizes leave a few ulps of rounding in the sum.
    if (TieSizesArePowersOfTwo(m)) {
      v.check(champ_total == static_cast<double>(n), "champion counts sum");
    } else {
      v.check(std::abs(champ_total - static_cast<double>(n)) <= 8 * n * 1e-16,
              "champion counts sum");
    }
    const auto avg = average_ranks(m);
    const auto hm = harmonic_mean_ranks(m);
    for (const auto& e : m.entries()) {
      v.check(hm.at(e) <= avg.at(e) + 1e-12, "harmonic mean above average rank");
    }
    const auto w = winrate_matrix(m);
    for (std::size_t a = 0; a < k; ++a) {
      for (std::size_t b = 0; b < k; ++b) {
        v.check(w(a, b) + w(b, a) == 1.0, "win-rate antisymmetry");
      }
    }
    // Per dataset: best scores 1, median scores 0, best is 0% improvable.
    for (std::size_t d = 0; d < n; ++d) {
      const auto col = m.column(d);
      auto sorted = col;
      std::sort(sorted.begin(), sorted.end());
      const double median = k % 2 ? sorted[k / 2]
                                  : (sorted[k / 2 - 1] + sorted[k / 2]) / 2.0;
      const double best = sorted.front();
      const ErrorMatrix single(m.entries(), {"d"}, col);
      const auto s = normalized_scores(single);
      const auto imp = improvability(single);
      for (std::size_t e = 0; e < k; ++e) {
        const auto& name = m.entries()[e];
        if (col[e] == best) {
          v.check(s.at(name) == 1.0, "best normalized score != 1");
          v.check(imp.at(name) == 0.0, "best improvability != 0");
        }
        if (col[e] == median && median > best) {
          v.check(s.at(name) == 0.0, "median normalized score != 0");
        }
      }
    }
  }
  if (v.ok) v.detail = "100 random tables";
  return v;
}

Verdict NemenyiCd() {
  Verdict v;
  std::vector<double> errors(60);
  for (std::size_t d = 0; d < 20; ++d) {
    errors[d] = 0.1;
    errors[20 + d] = d % 2 ? 0.2 : 0.3;
    errors[40 + d] = d % 2 ? 0.3 : 0.2;
  }
  std::vector<std::string> datasets;
  for (int d = 0; d < 20; ++d) datasets.push_back("d" + std::to_string(d));
  const auto cd = friedman_nemenyi(ErrorMatrix({"best", "x", "y"}, datasets, errors));
  v.check(std::abs(cd.critical_distance - 0.7409) <= 1e-4,
          "CD " + Num(cd.critical_distance));
  // Worst by average rank is "y" on the last tie-break, "x" and "y" share 2.5.
  bool separate = true;
  for (const auto& g : cd.groups) {
    const bool has_best = std::find(g.begin(), g.end(), "best") != g.end();
    const bool has_other = std::find(g.begin(), g.end(), "x") != g.end() ||
                           std::find(g.begin(), g.end(), "y") != g.end();
    separate = separate && !(has_best && has_other);
  }
  v.check(separate, "best shares a group with the worst");
  if (v.ok) v.detail = "CD " + Num(cd.critical_distance) + ", " +
                       std::to_string(cd.groups.size()) + " groups";
  return v;
}

Verdict BootstrapDeterminism() {
  Verdict v;
  const EvalTable& table = PlantedEvaluation().test;
  const auto a = build_leaderboard(table, PlantedBoardOptions(9));
  const auto b = build_leaderboard(table, PlantedBoardOptions(9));
  v.check(render_elo(a, Format::kCsv) == render_elo(b, Format::kCsv),
          "CI files differ");
  for (const auto& r : a.rows) {
    v.check(r.elo_lower <= r.elo && r.elo <= r.elo_upper,
            r.entry + " outside its CI");
  }
  if (v.ok) v.detail = "identical CI bytes, " + std::to_string(a.rows.size()) +
                       " point estimates inside their CI";
  return v;
}

Verdict PlantedOrdering() {
  Verdict v;
  // Timed end to end on one thread: generation, evaluation, rating.
  const auto start = Clock::now();
  const ResultStore store = MakePlantedStore();
  const auto board =
      build_leaderboard(EvaluateSerial(store).test, PlantedBoardOptions(11));
  const double secs = Seconds(start);
  std::map<std::string, double> elo;
  for (const auto& r : board.rows) elo[r.entry] = r.elo;
  for (Regime g : kAllRegimes) {
    const double hi = elo.at(entry_label("High", g));
    const double mid = elo.at(entry_label("Mid", g));
    const double lo = elo.at(entry_label("Low", g));
    v.check(hi > mid && mid > lo,
            std::string(regime_name(g)) + " order " + Num(hi) + " " + Num(mid) +
                " " + Num(lo));
  }
  const double te = elo.at("High (T+E)"), t = elo.at("High (T)");
  v.check(te >= t, "High T+E " + Num(te) + " < T " + Num(t));
  v.check(secs < 30.0, "took " + Num(secs) + " s");
  if (v.ok) {
    v.detail = "High > Mid > Low in every regime; High T+E " + Num(te) +
               " >= T " + Num(t) + "; " + Num(secs) + " s";
  }
  return v;
}

Verdict TrajectoryConsistency() {
  Verdict v;
  const ResultStore& store = PlantedStore();
  TrajectoryOptions opts;
  opts.grid = {1, 3, 5};
  opts.n_samples = 5;
  opts.seed = 12;
  const auto points = tuning_trajectory(store, "High", opts);
  const EvalTable& te = PlantedEvaluation().test;
  for (const auto& d : store.datasets()) {
    v.check(points.back().test_error.at(d) == te.get("High (T+E)", d)->error,
            "full grid point differs on " + d);
  }
  auto copied = points;
  for (auto& p : copied) p.val_error = p.test_error;
  const auto test_elo = calibrate(
      fit_bradley_terry(pairwise_outcomes(trajectory_table(copied, false))),
      "High (n=1)");
  const auto val_elo = calibrate(
      fit_bradley_terry(pairwise_outcomes(trajectory_table(copied, true))),
      "High (n=1)");
  for (const auto& [label, gap] : overfitting_gap(test_elo, val_elo)) {
    v.check(gap == 0.0, "gap " + Num(gap) + " for " + label);
  }
  if (v.ok) v.detail = "full point bit-equal on 30 datasets, gaps exactly 0";
  return v;
}

Verdict PortfolioGreedy() {
  Verdict v;
  std::mt19937_64 gen(105);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 20; ++t) {
    std::vector<std::vector<double>> rows(6, std::vector<double>(3));
    std::vector<double> flat;
    std::vector<std::string> names;
    for (std::size_t c = 0; c < 6; ++c) {
      names.push_back("c" + std::to_string(c));
      for (auto& x : rows[c]) flat.push_back(x = u(gen));
    }
    const auto p = greedy_portfolio(ErrorMatrix(names, {"a", "b", "c"}, flat), 6);
    const auto ref = oracle::portfolio_bruteforce(rows, 6);
    for (std::size_t s = 0; s < ref.members.size(); ++s) {
      v.check(p.members[s] == names[ref.members[s]],
              "step " + std::to_string(s + 1) + " differs");
      if (s > 0) v.check(p.objective[s] <= p.objective[s - 1], "objective rose");
    }
  }
  if (v.ok) v.detail = "20 instances match step by step";
  return v;
}

Verdict CliDeterminism() {
  Verdict v;
  const auto dir = testing_support::scratch_dir("acceptance_cli");
  SynthPlan plan = testing_support::small_plan(3, 4);
  plan.methods = {{"RandomForest", 0.5, 2}, {"GBM", 0.8, 3}, {"KNN", 0.2, 1}};
  plan.mix = {0.5, 0.25, 0.25};
  write_store(generate(plan), dir / "store");
  auto run = [&](const std::string& name) {
    const auto out = dir / name;
    const std::string cmd = std::string(TABEVAL_CLI_PATH) + " leaderboard --input " +
                            (dir / "store").string() + " --seed 42 --format json" +
                            " --output " + out.string();
    const int raw = std::system(cmd.c_str());
    std::ifstream in(out, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return std::make_pair(WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, s.str());
  };
  const auto a = run("a.json");
  const auto b = run("b.json");
  v.check(a.first == 0 && b.first == 0, "CLI exited with failure");
  v.check(!a.second.empty() && a.second == b.second, "outputs differ");
  if (v.ok) v.detail = std::to_string(a.second.size()) + " identical bytes";
  std::filesystem::remove_all(dir);
  return v;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
      {"Elo two-player closed form", EloClosedForm},
      {"Expected win rate closed form", WinrateClosedForm},
      {"Bradley-Terry stationarity", Stationarity},
      {"AUC oracle equivalence", AucOracle},
      {"Greedy ensemble selection", GesChecks},
      {"Aggregation properties", AggregationProperties},
      {"Nemenyi critical distance", NemenyiCd},
      {"Bootstrap determinism", BootstrapDeterminism},
      {"Planted-ordering recovery", PlantedOrdering},
      {"Trajectory consistency", TrajectoryConsistency},
      {"Portfolio greedy", PortfolioGreedy},
      {"CLI determinism", CliDeterminism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v.ok = false;
      v.detail = std::string("exception: ") + e.what();
    }
    failures += !v.ok;
    std::printf("%s [%zu] %s: %s\n", v.ok ? "PASS" : "FAIL", i + 1,
                criteria[i].first.c_str(), v.detail.c_str());
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
