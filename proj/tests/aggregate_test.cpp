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

#include <boost/math/distributions/chi_squared.hpp>

#include "oracles.hpp"
#include "tabeval/aggregate.hpp"
#include "tabeval/error.hpp"

namespace tabeval {
namespace {

ErrorMatrix Matrix(std::size_t k, std::size_t n, std::vector<double> errors) {
  std::vector<std::string> entries, datasets;
  for (std::size_t e = 0; e < k; ++e) entries.push_back("m" + std::to_string(e));
  for (std::size_t d = 0; d < n; ++d) datasets.push_back("d" + std::to_string(d));
  return ErrorMatrix(entries, datasets, std::move(errors));
}

ErrorMatrix RandomMatrix(std::mt19937_64& gen, std::size_t k, std::size_t n,
                         bool ties = false) {
  std::uniform_real_distribution<double> u(0.01, 1.0);
  std::uniform_int_distribution<int> level(1, 4);
  std::vector<double> errors(k * n);
  for (auto& e : errors) e = ties ? level(gen) / 4.0 : u(gen);
  return Matrix(k, n, std::move(errors));
}

TEST(NormalizedScoreTest, FormulaOnSmallTable) {
  EXPECT_EQ(normalized_scores(Matrix(3, 1, {0.1, 0.2, 0.3})),
            (std::map<std::string, double>{{"m0", 1.0}, {"m1", 0.0}, {"m2", 0.0}}));
  // Even count: median 0.25 between 0.2 and 0.3.
  const auto s = normalized_scores(Matrix(4, 1, {0.1, 0.2, 0.3, 0.4}));
  EXPECT_NEAR(s.at("m1"), (0.25 - 0.2) / (0.25 - 0.1), 1e-15);
}

TEST(NormalizedScoreTest, BestIsOneAndMedianIsZeroPerDataset) {
  std::mt19937_64 gen(3);
  for (int t = 0; t < 30; ++t) {
    const ErrorMatrix m = RandomMatrix(gen, 5, 1);
    const auto s = normalized_scores(m);
    const auto col = m.column(0);
    const auto r = oracle::ranks(col);
    for (std::size_t e = 0; e < 5; ++e) {
      if (r[e] == 1.0) EXPECT_DOUBLE_EQ(s.at(m.entries()[e]), 1.0);
      if (r[e] == 3.0) EXPECT_DOUBLE_EQ(s.at(m.entries()[e]), 0.0);
    }
  }
}

TEST(RankTest, MatchesSortOracle) {
  std::mt19937_64 gen(5);
  for (int t = 0; t < 30; ++t) {
    const ErrorMatrix m = RandomMatrix(gen, 6, 1, true);
    const auto col = m.column(0);
    EXPECT_EQ(rank_errors(col), oracle::ranks(col));
  }
}

TEST(AggregateTest, PropertiesOnRandomTables) {
  std::mt19937_64 gen(7);
  for (int t = 0; t < 30; ++t) {
    const ErrorMatrix m = RandomMatrix(gen, 5, 8, t % 2 == 0);
    const auto imp = improvability(m);
    const auto champs = champion_counts(m);
    const auto avg = average_ranks(m);
    const auto hm = harmonic_mean_ranks(m);
    double champ_total = 0.0;
    for (const auto& [e, c] : champs) champ_total += c;
    EXPECT_NEAR(champ_total, 8.0, 1e-14);
    for (const auto& e : m.entries()) {
      EXPECT_LE(hm.at(e), avg.at(e) + 1e-12);
      EXPECT_GE(imp.at(e), 0.0);
    }
    const auto w = winrate_matrix(m);
    for (std::size_t a = 0; a < 5; ++a) {
      for (std::size_t b = 0; b < 5; ++b) EXPECT_EQ(w(a, b) + w(b, a), 1.0);
    }
  }
}

TEST(AggregateTest, ChampionCountsSplitTies) {
  // Unique winners and two-way ties sum exactly.
  const auto c = champion_counts(Matrix(3, 4, {0.1, 0.2, 0.3, 0.1,  //
                                              0.1, 0.1, 0.4, 0.2,  //
                                              0.5, 0.3, 0.2, 0.3}));
  // Rows are entries: d0 is a two-way tie between m0 and m1.
  EXPECT_EQ(c.at("m0"), 1.5);
  EXPECT_EQ(c.at("m1"), 1.5);
  EXPECT_EQ(c.at("m2"), 1.0);
  const auto half = champion_counts(Matrix(2, 1, {0.1, 0.1}));
  EXPECT_EQ(half.at("m0"), 0.5);
  double total = 0.0;
  for (const auto& [e, x] : c) total += x;
  EXPECT_EQ(total, 4.0);
}

TEST(AggregateTest, ImprovabilityOfDatasetBestIsZero) {
  const ErrorMatrix m = Matrix(2, 2, {0.1, 0.3, 0.2, 0.4});
  const auto imp = improvability(m);
  EXPECT_EQ(imp.at("m0"), 0.0);
  EXPECT_NEAR(imp.at("m1"), (50.0 + 25.0) / 2.0, 1e-12);
}

TEST(AggregateTest, HarmonicMeanRank) {
  EXPECT_NEAR(harmonic_mean_rank(std::vector<double>{1.0, 3.0}), 1.5, 1e-15);
}

TEST(NemenyiTest, TableValues) {
  EXPECT_DOUBLE_EQ(nemenyi_q(2), 1.960);
  EXPECT_DOUBLE_EQ(nemenyi_q(3), 2.343);
  EXPECT_DOUBLE_EQ(nemenyi_q(10), 3.164);
  EXPECT_THROW(nemenyi_q(51), UnsupportedError);
  EXPECT_THROW(nemenyi_q(3, 0.1), UnsupportedError);
}

TEST(FriedmanNemenyiTest, DominantEntrySeparates) {
  // m0 always first; m1 and m2 alternate.
  std::vector<double> errors(3 * 20);
  for (std::size_t d = 0; d < 20; ++d) {
    errors[0 * 20 + d] = 0.1;
    errors[1 * 20 + d] = d % 2 ? 0.2 : 0.3;
    errors[2 * 20 + d] = d % 2 ? 0.3 : 0.2;
  }
  const auto cd = friedman_nemenyi(Matrix(3, 20, errors));
  EXPECT_NEAR(cd.critical_distance, 2.343 * std::sqrt(12.0 / 120.0), 1e-12);
  EXPECT_EQ(cd.average_ranks, (std::vector<double>{1.0, 2.5, 2.5}));
  ASSERT_EQ(cd.groups.size(), 2u);
  EXPECT_EQ(cd.groups[0], (std::vector<std::string>{"m0"}));
  // chi2 = 12N/(k(k+1)) * (sum R^2 - k(k+1)^2/4)
  const double chi2 = 12.0 * 20 / 12.0 * (1.0 + 6.25 + 6.25 - 12.0);
  EXPECT_NEAR(cd.friedman_statistic, chi2, 1e-12);
  boost::math::chi_squared dist(2);
  EXPECT_NEAR(cd.p_value, boost::math::cdf(boost::math::complement(dist, chi2)),
              1e-15);
}

TEST(FriedmanNemenyiTest, TwoEntriesUnsupported) {
  EXPECT_THROW(friedman_nemenyi(Matrix(2, 3, {1, 2, 3, 4, 5, 6})),
               UnsupportedError);
}

}  // namespace
}  // namespace tabeval
