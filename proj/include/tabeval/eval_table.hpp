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

// Per-(entry, dataset) averaged errors, the input to every aggregation.
//
// An "entry" is whatever gets rated: usually a method under one regime
// ("GBM (T+E)"), but trajectory points and portfolios use the same table.

#ifndef TABEVAL_EVAL_TABLE_HPP_
#define TABEVAL_EVAL_TABLE_HPP_

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace tabeval {

enum class Regime { kDefault, kTuned, kTunedEnsembled };

inline constexpr Regime kAllRegimes[] = {Regime::kDefault, Regime::kTuned,
                                         Regime::kTunedEnsembled};

// "default", "tuned", "tuned_ensembled".
std::string_view regime_name(Regime regime);
// "D", "T", "T+E".
std::string_view regime_tag(Regime regime);
Regime parse_regime(std::string_view name);

// "GBM (T+E)".
std::string entry_label(std::string_view method, Regime regime);

// Maps a METHOD/CONFIG reference ("RandomForest/default") onto the entry
// label it anchors ("RandomForest (D)"). CONFIG may also name a regime.
// A string without '/' is taken as a label verbatim.
std::string reference_label(std::string_view reference);

struct EvalCell {
  double error = 0.0;
  bool imputed = false;
  bool operator==(const EvalCell&) const = default;
};

class EvalTable {
 public:
  void set(const std::string& entry, const std::string& dataset_id,
           double error, bool imputed = false);
  std::optional<EvalCell> get(const std::string& entry,
                              const std::string& dataset_id) const;
  bool contains(const std::string& entry, const std::string& dataset_id) const;

  std::vector<std::string> entries() const;
  // Union of datasets over all entries, sorted.
  std::vector<std::string> datasets() const;
  std::size_t imputed_count(const std::string& entry) const;
  std::size_t size() const;

  // New table with only the given entries (missing ones are skipped).
  EvalTable select(std::span<const std::string> entries) const;

  const std::map<std::string, std::map<std::string, EvalCell>>& cells() const {
    return cells_;
  }
  bool operator==(const EvalTable&) const = default;

 private:
  std::map<std::string, std::map<std::string, EvalCell>> cells_;
};

// Fills every (entry, dataset) hole with the reference entry's error on that
// dataset and flags the filled cells. The dataset universe is the union of
// datasets in the table; throws InputError naming the first dataset the
// reference does not cover. Idempotent.
EvalTable impute_missing(const EvalTable& table,
                         const std::string& reference_entry);

// Dense entries x datasets matrix with full coverage.
class ErrorMatrix {
 public:
  ErrorMatrix() = default;
  ErrorMatrix(std::vector<std::string> entries,
              std::vector<std::string> datasets, std::vector<double> errors);

  // Throws InputError naming the first (entry, dataset) hole.
  static ErrorMatrix from_table(const EvalTable& table);

  std::size_t n_entries() const { return entries_.size(); }
  std::size_t n_datasets() const { return datasets_.size(); }
  const std::vector<std::string>& entries() const { return entries_; }
  const std::vector<std::string>& datasets() const { return datasets_; }

  double operator()(std::size_t entry, std::size_t dataset) const {
    return errors_[entry * datasets_.size() + dataset];
  }
  // Errors of every entry on one dataset.
  std::vector<double> column(std::size_t dataset) const;
  std::size_t index_of(const std::string& entry) const;

  // Columns picked by index (repeats allowed), for bootstrap resamples.
  ErrorMatrix with_columns(std::span<const std::size_t> columns) const;

 private:
  std::vector<std::string> entries_;
  std::vector<std::string> datasets_;
  std::vector<double> errors_;
};

}  // namespace tabeval

#endif  // TABEVAL_EVAL_TABLE_HPP_
