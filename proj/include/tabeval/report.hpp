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

// Text renderings of analysis results. CSV and JSON use shortest
// round-trip float formatting, so equal inputs give identical bytes.

#ifndef TABEVAL_REPORT_HPP_
#define TABEVAL_REPORT_HPP_

#include <string>
#include <string_view>
#include <vector>

#include "tabeval/aggregate.hpp"
#include "tabeval/pipeline.hpp"
#include "tabeval/result_store.hpp"

namespace tabeval {

// Version of the JSON output schemas, bumped on incompatible changes.
inline constexpr int kReportSchemaVersion = 1;

enum class Format { kMarkdown, kCsv, kJson };

Format parse_format(std::string_view name);

// Shortest decimal that parses back to the same double.
std::string format_double(double value);

std::string render_split_report(const std::vector<SplitReportEntry>& report);
std::string render_leaderboard(const Leaderboard& board, Format format);
// Elo columns only.
std::string render_elo(const Leaderboard& board, Format format);
std::string render_winrate(const WinrateMatrix& matrix, Format format);
std::string render_cdd(const CriticalDifference& cd, Format format);
std::string render_trajectory(const TrajectoryReport& report, Format format);
std::string render_portfolio(const PortfolioReport& report, Format format);

}  // namespace tabeval

#endif  // TABEVAL_REPORT_HPP_
