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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "tabeval/error.hpp"
#include "tabeval/rating.hpp"

namespace tabeval {
namespace {

std::vector<PairwiseOutcome> TenToOne() {
  std::vector<PairwiseOutcome> out;
  for (int d = 0; d < 11; ++d) {
    out.push_back({"A", "B", "d" + std::to_string(d), d < 10 ? 1.0 : 0.0});
  }
  return out;
}

ErrorMatrix RandomMatrix(std::mt19937_64& gen, std::size_t k, std::size_t n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<std::string> entries, datasets;
  for (std::size_t e = 0; e < k; ++e) entries.push_back("m" + std::to_string(e));
  for (std::size_t d = 0; d < n; ++d) datasets.push_back("d" + std::to_string(d));
  std::vector<double> errors(k * n);
  for (std::size_t e = 0; e < k; ++e) {
    for (std::size_t d = 0; d < n; ++d) {
      errors[e * n + d] = u(gen) + 0.15 * static_cast<double>(e);
    }
  }
  return ErrorMatrix(entries, datasets, errors);
}

TEST(BradleyTerryTest, TenToOneGivesFourHundredElo) {
  BradleyTerryOptions opts;
  opts.virtual_ties = false;
  const auto r = fit_bradley_terry(TenToOne(), opts);
  EXPECT_NEAR(r.at("A") - r.at("B"), 400.0, 1e-6);
  EXPECT_NEAR(r.at("A") + r.at("B"), 0.0, 1e-9);
}

TEST(BradleyTerryTest, VirtualTiesShrinkTheGap) {
  const auto r = fit_bradley_terry(TenToOne());
  // 10.5 wins out of 12 games.
  EXPECT_NEAR(r.at("A") - r.at("B"), 400.0 * std::log10(10.5 / 1.5), 1e-6);
}

TEST(BradleyTerryTest, StationaryPointOfLogLikelihood) {
  std::mt19937_64 gen(31);
  for (int t = 0; t < 5; ++t) {
    const ErrorMatrix m = RandomMatrix(gen, 5, 12);
    const auto outcomes = pairwise_outcomes(m);
    const auto r = fit_bradley_terry(outcomes);
    std::vector<oracle::Game> games;
    for (const auto& o : outcomes) {
      games.push_back({m.index_of(o.method_a), m.index_of(o.method_b), o.score_a});
    }
    for (std::size_t a = 0; a < 5; ++a) {
      for (std::size_t b = a + 1; b < 5; ++b) games.push_back({a, b, 0.5});
    }
    std::vector<double> elo;
    for (const auto& e : m.entries()) elo.push_back(r.at(e));
    for (double g : oracle::bt_gradient_fd(games, elo)) EXPECT_LT(std::abs(g), 1e-6);
  }
}

TEST(BradleyTerryTest, UndefeatedEntryNeedsVirtualTies) {
  std::vector<PairwiseOutcome> sweep = {{"A", "B", "d0", 1.0}, {"A", "B", "d1", 1.0}};
  BradleyTerryOptions opts;
  opts.virtual_ties = false;
  EXPECT_THROW(fit_bradley_terry(sweep, opts), ConvergenceError);
  EXPECT_NO_THROW(fit_bradley_terry(sweep));
}

TEST(BradleyTerryTest, DisconnectedGraphNamesComponents) {
  std::vector<PairwiseOutcome> split = {{"A", "B", "d0", 1.0}, {"C", "D", "d0", 0.0}};
  try {
    fit_bradley_terry(split);
    FAIL() << "expected DisconnectedGraphError";
  } catch (const DisconnectedGraphError& e) {
    EXPECT_EQ(e.components().size(), 2u);
  }
}

TEST(EloTest, ExpectedWinrateClosedForm) {
  EXPECT_NEAR(expected_winrate(400.0), 10.0 / 11.0, 1e-12);
  EXPECT_DOUBLE_EQ(expected_winrate(0.0), 0.5);
  for (int i = 0; i < 100; ++i) {
    const double g = -1000.0 + 20.0 * i;
    EXPECT_NEAR(expected_winrate(g) + expected_winrate(-g), 1.0, 1e-12);
  }
}

TEST(EloTest, CalibratePinsReference) {
  const auto r = calibrate(fit_bradley_terry(TenToOne()), "B");
  EXPECT_DOUBLE_EQ(r.at("B"), 1000.0);
  EXPECT_EQ(r.anchor, Anchor::kReference);
  EXPECT_THROW(calibrate(r, "Z"), ConfigError);
}

TEST(PairwiseOutcomeTest, ScoresLowerErrorAsWin) {
  ErrorMatrix m({"a", "b"}, {"d0", "d1"}, {0.1, 0.2, 0.1, 0.3});
  const auto out = pairwise_outcomes(m);
  ASSERT_EQ(out.size(), 2u);
  EXPECT_DOUBLE_EQ(out[0].score_a, 0.5);
  EXPECT_DOUBLE_EQ(out[1].score_a, 1.0);
}

TEST(QuantileTest, LinearInterpolation) {
  EXPECT_DOUBLE_EQ(quantile_linear({4, 1, 3, 2}, 0.5), 2.5);
  EXPECT_DOUBLE_EQ(quantile_linear({1, 2, 3, 4, 5}, 0.025), 1.1);
  EXPECT_DOUBLE_EQ(quantile_linear({7}, 0.975), 7.0);
}

TEST(BootstrapTest, DeterministicAndContainsPointEstimate) {
  std::mt19937_64 gen(41);
  const ErrorMatrix m = RandomMatrix(gen, 4, 15);
  BootstrapOptions opts;
  opts.n_bootstrap = 100;
  opts.seed = 5;
  const auto a = bootstrap_elo(m, "m0", opts);
  const auto b = bootstrap_elo(m, "m0", opts);
  EXPECT_EQ(a.ci, b.ci);
  EXPECT_EQ(a.rating, b.rating);
  for (const auto& [entry, iv] : a.ci.intervals) {
    EXPECT_LE(iv.lower, a.rating.at(entry));
    EXPECT_GE(iv.upper, a.rating.at(entry));
  }
  opts.seed = 6;
  EXPECT_NE(bootstrap_elo(m, "m0", opts).ci, a.ci);
}

TEST(BootstrapTest, ZeroRoundsCollapseToPoint) {
  std::mt19937_64 gen(43);
  const ErrorMatrix m = RandomMatrix(gen, 3, 6);
  BootstrapOptions opts;
  opts.n_bootstrap = 0;
  const auto est = bootstrap_elo(m, "m1", opts);
  for (const auto& [entry, iv] : est.ci.intervals) {
    EXPECT_EQ(iv.lower, est.rating.at(entry));
    EXPECT_EQ(iv.upper, est.rating.at(entry));
  }
}

}  // namespace
}  // namespace tabeval
