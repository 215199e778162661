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

#include "tabeval/report.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "json.hpp"
#include "tabeval/error.hpp"

namespace tabeval {
namespace {

using nlohmann::ordered_json;

std::string Fixed(double value, int precision) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), value,
                           std::chars_format::fixed, precision);
  return std::string(buf, res.ptr);
}

// CSV field quoting for labels such as "GBM (T+E)".
std::string Csv(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

// JSON numbers keep full precision; the shortest round-trip string is
// embedded as a raw number token.
ordered_json Num(double value) {
  return ordered_json::parse(format_double(value));
}

std::string Dump(const ordered_json& doc) { return doc.dump(2) + "\n"; }

void MarkdownRow(std::ostringstream& out, const std::vector<std::string>& cells) {
  out << "|";
  for (const auto& c : cells) out << " " << c << " |";
  out << "\n";
}

void MarkdownHeader(std::ostringstream& out,
                    const std::vector<std::string>& names) {
  MarkdownRow(out, names);
  out << "|";
  for (std::size_t i = 0; i < names.size(); ++i) out << "---|";
  out << "\n";
}

ordered_json ErrorsJson(const EvalTable& table) {
  ordered_json out = ordered_json::object();
  for (const auto& [entry, row] : table.cells()) {
    ordered_json cells = ordered_json::object();
    for (const auto& [dataset, cell] : row) cells[dataset] = Num(cell.error);
    out[entry] = std::move(cells);
  }
  return out;
}

std::string RenderBoard(const Leaderboard& board, Format format, bool full) {
  std::ostringstream out;
  switch (format) {
    case Format::kMarkdown: {
      std::vector<std::string> head = {"Entry", "Elo", "95% CI"};
      if (full) {
        head.insert(head.end(), {"Norm. score", "Avg. rank", "Harm. mean rank",
                                 "#wins", "Improvability (%)", "Imputed"});
      }
      MarkdownHeader(out, head);
      for (const auto& r : board.rows) {
        std::vector<std::string> cells = {
            r.entry, Fixed(r.elo, 0),
            "[" + Fixed(r.elo_lower, 0) + ", " + Fixed(r.elo_upper, 0) + "]"};
        if (full) {
          cells.insert(cells.end(),
                       {Fixed(r.normalized_score, 3), Fixed(r.average_rank, 2),
                        Fixed(r.harmonic_mean_rank, 2), Fixed(r.wins, 1),
                        Fixed(r.improvability, 2),
                        std::to_string(r.imputed_count)});
        }
        MarkdownRow(out, cells);
      }
      out << "\nReference: " << board.reference << " = 1000 Elo; "
          << board.datasets.size() << " datasets; " << board.n_bootstrap
          << " bootstrap rounds (seed " << board.seed << ").\n";
      return out.str();
    }
    case Format::kCsv: {
      out << "entry,elo,elo_lower,elo_upper";
      if (full) {
        out << ",normalized_score,average_rank,harmonic_mean_rank,wins,"
               "improvability_pct,imputed_count";
      }
      out << "\n";
      for (const auto& r : board.rows) {
        out << Csv(r.entry) << "," << format_double(r.elo) << ","
            << format_double(r.elo_lower) << "," << format_double(r.elo_upper);
        if (full) {
          out << "," << format_double(r.normalized_score) << ","
              << format_double(r.average_rank) << ","
              << format_double(r.harmonic_mean_rank) << ","
              << format_double(r.wins) << "," << format_double(r.improvability)
              << "," << r.imputed_count;
        }
        out << "\n";
      }
      return out.str();
    }
    case Format::kJson: {
      ordered_json doc;
      doc["schema_version"] = kReportSchemaVersion;
      doc["kind"] = full ? "leaderboard" : "elo";
      doc["reference"] = board.reference;
      doc["n_bootstrap"] = board.n_bootstrap;
      doc["seed"] = board.seed;
      doc["datasets"] = board.datasets;
      doc["rows"] = ordered_json::array();
      for (const auto& r : board.rows) {
        ordered_json row;
        row["entry"] = r.entry;
        row["elo"] = Num(r.elo);
        row["elo_lower"] = Num(r.elo_lower);
        row["elo_upper"] = Num(r.elo_upper);
        if (full) {
          row["normalized_score"] = Num(r.normalized_score);
          row["average_rank"] = Num(r.average_rank);
          row["harmonic_mean_rank"] = Num(r.harmonic_mean_rank);
          row["wins"] = Num(r.wins);
          row["improvability_pct"] = Num(r.improvability);
          row["imputed_count"] = r.imputed_count;
        }
        doc["rows"].push_back(std::move(row));
      }
      if (full) doc["errors"] = ErrorsJson(board.errors);
      return Dump(doc);
    }
  }
  return {};
}

}  // namespace

Format parse_format(std::string_view name) {
  if (name == "markdown" || name == "md") return Format::kMarkdown;
  if (name == "csv") return Format::kCsv;
  if (name == "json") return Format::kJson;
  throw ConfigError("unknown format '" + std::string(name) + "'");
}

std::string format_double(double value) {
  if (!std::isfinite(value)) {
    throw InputError("cannot format a non-finite number");
  }
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), value);
  std::string out(buf, res.ptr);
  // Keep JSON/CSV consumers from reading integral values as ints.
  if (out.find_first_of(".eE") == std::string::npos) out += ".0";
  return out;
}

std::string render_split_report(const std::vector<SplitReportEntry>& report) {
  std::ostringstream out;
  if (report.empty()) {
    out << "all methods cover their expected outer splits\n";
    return out.str();
  }
  for (const auto& e : report) {
    out << e.dataset_id << " / " << e.method << ":";
    if (!e.missing.empty()) {
      out << " missing " << e.missing.size() << " split(s):";
      for (SplitId s : e.missing) out << " " << to_string(s);
    }
    if (!e.unexpected.empty()) {
      out << " unexpected " << e.unexpected.size() << " split(s):";
      for (SplitId s : e.unexpected) out << " " << to_string(s);
    }
    out << "\n";
  }
  return out.str();
}

std::string render_leaderboard(const Leaderboard& board, Format format) {
  return RenderBoard(board, format, true);
}

std::string render_elo(const Leaderboard& board, Format format) {
  return RenderBoard(board, format, false);
}

std::string render_winrate(const WinrateMatrix& matrix, Format format) {
  std::ostringstream out;
  const std::size_t k = matrix.entries.size();
  switch (format) {
    case Format::kMarkdown: {
      std::vector<std::string> head = {"Row beats column"};
      head.insert(head.end(), matrix.entries.begin(), matrix.entries.end());
      MarkdownHeader(out, head);
      for (std::size_t a = 0; a < k; ++a) {
        std::vector<std::string> cells = {matrix.entries[a]};
        for (std::size_t b = 0; b < k; ++b) cells.push_back(Fixed(matrix(a, b), 3));
        MarkdownRow(out, cells);
      }
      return out.str();
    }
    case Format::kCsv: {
      out << "entry";
      for (const auto& e : matrix.entries) out << "," << Csv(e);
      out << "\n";
      for (std::size_t a = 0; a < k; ++a) {
        out << Csv(matrix.entries[a]);
        for (std::size_t b = 0; b < k; ++b) out << "," << format_double(matrix(a, b));
        out << "\n";
      }
      return out.str();
    }
    case Format::kJson: {
      ordered_json doc;
      doc["schema_version"] = kReportSchemaVersion;
      doc["kind"] = "winrate";
      doc["entries"] = matrix.entries;
      doc["matrix"] = ordered_json::array();
      for (std::size_t a = 0; a < k; ++a) {
        ordered_json row = ordered_json::array();
        for (std::size_t b = 0; b < k; ++b) row.push_back(Num(matrix(a, b)));
        doc["matrix"].push_back(std::move(row));
      }
      return Dump(doc);
    }
  }
  return {};
}

std::string render_cdd(const CriticalDifference& cd, Format format) {
  std::ostringstream out;
  switch (format) {
    case Format::kMarkdown: {
      MarkdownHeader(out, {"Entry", "Avg. rank", "Group"});
      for (std::size_t i = 0; i < cd.entries.size(); ++i) {
        std::size_t group = 0;
        for (std::size_t g = 0; g < cd.groups.size(); ++g) {
          for (const auto& m : cd.groups[g]) {
            if (m == cd.entries[i]) group = g + 1;
          }
        }
        MarkdownRow(out, {cd.entries[i], Fixed(cd.average_ranks[i], 3),
                          std::to_string(group)});
      }
      out << "\nFriedman chi2 = " << Fixed(cd.friedman_statistic, 4)
          << " (p = " << format_double(cd.p_value)
          << "), Nemenyi CD = " << Fixed(cd.critical_distance, 4)
          << " at alpha = " << format_double(cd.alpha) << ", N = "
          << cd.n_datasets << "\n";
      return out.str();
    }
    case Format::kCsv: {
      out << "entry,average_rank,group\n";
      for (std::size_t g = 0; g < cd.groups.size(); ++g) {
        for (const auto& m : cd.groups[g]) {
          for (std::size_t i = 0; i < cd.entries.size(); ++i) {
            if (cd.entries[i] == m) {
              out << Csv(m) << "," << format_double(cd.average_ranks[i]) << ","
                  << g + 1 << "\n";
            }
          }
        }
      }
      return out.str();
    }
    case Format::kJson: {
      ordered_json doc;
      doc["schema_version"] = kReportSchemaVersion;
      doc["kind"] = "cdd";
      doc["n_datasets"] = cd.n_datasets;
      doc["alpha"] = Num(cd.alpha);
      doc["friedman_statistic"] = Num(cd.friedman_statistic);
      doc["p_value"] = Num(cd.p_value);
      doc["critical_distance"] = Num(cd.critical_distance);
      doc["average_ranks"] = ordered_json::object();
      for (std::size_t i = 0; i < cd.entries.size(); ++i) {
        doc["average_ranks"][cd.entries[i]] = Num(cd.average_ranks[i]);
      }
      doc["groups"] = cd.groups;
      return Dump(doc);
    }
  }
  return {};
}

std::string render_trajectory(const TrajectoryReport& report, Format format) {
  std::ostringstream out;
  auto label_elo = [&](const EloRating& r, const std::string& label) {
    auto it = r.ratings.find(label);
    return it == r.ratings.end() ? 0.0 : it->second;
  };
  switch (format) {
    case Format::kMarkdown: {
      MarkdownHeader(out, {"Method", "#configs", "Test Elo", "Validation Elo",
                           "Gap"});
      for (const auto& p : report.points) {
        const std::string label = trajectory_label(p);
        MarkdownRow(out, {p.method, std::to_string(p.n_configs),
                          Fixed(label_elo(report.test_elo, label), 0),
                          Fixed(label_elo(report.val_elo, label), 0),
                          Fixed(report.overfitting_gap.at(label), 0)});
      }
      out << "\nReference: " << report.reference << " = 1000 Elo on test and "
          << "on validation.\n";
      return out.str();
    }
    case Format::kCsv: {
      out << "method,n_configs,sampled,dataset,test_error,val_error\n";
      for (const auto& p : report.points) {
        for (const auto& [dataset, err] : p.test_error) {
          out << Csv(p.method) << "," << p.n_configs << ","
              << (p.sampled ? "true" : "false") << "," << Csv(dataset) << ","
              << format_double(err) << "," << format_double(p.val_error.at(dataset))
              << "\n";
        }
      }
      return out.str();
    }
    case Format::kJson: {
      ordered_json doc;
      doc["schema_version"] = kReportSchemaVersion;
      doc["kind"] = "trajectory";
      doc["reference"] = report.reference;
      doc["points"] = ordered_json::array();
      for (const auto& p : report.points) {
        const std::string label = trajectory_label(p);
        ordered_json point;
        point["method"] = p.method;
        point["n_configs"] = p.n_configs;
        point["sampled"] = p.sampled;
        point["test_elo"] = Num(label_elo(report.test_elo, label));
        point["val_elo"] = Num(label_elo(report.val_elo, label));
        point["overfitting_gap"] = Num(report.overfitting_gap.at(label));
        point["test_error"] = ordered_json::object();
        point["val_error"] = ordered_json::object();
        for (const auto& [d, e] : p.test_error) point["test_error"][d] = Num(e);
        for (const auto& [d, e] : p.val_error) point["val_error"][d] = Num(e);
        doc["points"].push_back(std::move(point));
      }
      return Dump(doc);
    }
  }
  return {};
}

std::string render_portfolio(const PortfolioReport& report, Format format) {
  std::ostringstream out;
  switch (format) {
    case Format::kMarkdown: {
      MarkdownHeader(out, {"Held-out dataset", "Portfolio size",
                           "Portfolio ensemble error", "All-model ensemble error"});
      for (const auto& r : report.rows) {
        MarkdownRow(out, {r.held_out, std::to_string(r.members.size()),
                          Fixed(r.portfolio_test_error, 4),
                          Fixed(r.full_ensemble_test_error, 4)});
      }
      out << "\n";
      MarkdownHeader(out, {"Family", "Average weight"});
      for (const auto& [family, w] : report.family_weights) {
        MarkdownRow(out, {family, Fixed(w, 3)});
      }
      return out.str();
    }
    case Format::kCsv: {
      out << "held_out,portfolio_size,portfolio_test_error,portfolio_val_error,"
             "full_ensemble_test_error\n";
      for (const auto& r : report.rows) {
        out << Csv(r.held_out) << "," << r.members.size() << ","
            << format_double(r.portfolio_test_error) << ","
            << format_double(r.portfolio_val_error) << ","
            << format_double(r.full_ensemble_test_error) << "\n";
      }
      return out.str();
    }
    case Format::kJson: {
      ordered_json doc;
      doc["schema_version"] = kReportSchemaVersion;
      doc["kind"] = "portfolio";
      doc["max_size"] = report.max_size;
      doc["ges_steps"] = report.ges_steps;
      doc["rows"] = ordered_json::array();
      for (const auto& r : report.rows) {
        ordered_json row;
        row["held_out"] = r.held_out;
        row["members"] = r.members;
        row["portfolio_test_error"] = Num(r.portfolio_test_error);
        row["portfolio_val_error"] = Num(r.portfolio_val_error);
        row["full_ensemble_test_error"] = Num(r.full_ensemble_test_error);
        doc["rows"].push_back(std::move(row));
      }
      doc["family_weights"] = ordered_json::object();
      for (const auto& [family, w] : report.family_weights) {
        doc["family_weights"][family] = Num(w);
      }
      return Dump(doc);
    }
  }
  return {};
}

}  // namespace tabeval
