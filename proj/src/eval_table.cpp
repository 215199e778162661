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

#include "tabeval/eval_table.hpp"

#include <algorithm>
#include <set>

#include "tabeval/error.hpp"

namespace tabeval {

std::string_view regime_name(Regime regime) {
  switch (regime) {
    case Regime::kDefault:
      return "default";
    case Regime::kTuned:
      return "tuned";
    case Regime::kTunedEnsembled:
      return "tuned_ensembled";
  }
  return "unknown";
}

std::string_view regime_tag(Regime regime) {
  switch (regime) {
    case Regime::kDefault:
      return "D";
    case Regime::kTuned:
      return "T";
    case Regime::kTunedEnsembled:
      return "T+E";
  }
  return "?";
}

Regime parse_regime(std::string_view name) {
  for (Regime r : kAllRegimes) {
    if (name == regime_name(r) || name == regime_tag(r)) return r;
  }
  throw InputError("unknown regime '" + std::string(name) + "'");
}

std::string entry_label(std::string_view method, Regime regime) {
  return std::string(method) + " (" + std::string(regime_tag(regime)) + ")";
}

std::string reference_label(std::string_view reference) {
  const auto slash = reference.rfind('/');
  if (slash == std::string_view::npos) return std::string(reference);
  const std::string_view method = reference.substr(0, slash);
  const std::string_view config = reference.substr(slash + 1);
  if (method.empty()) {
    throw ConfigError("reference '" + std::string(reference) +
                      "' has an empty method");
  }
  try {
    return entry_label(method, parse_regime(config));
  } catch (const InputError&) {
    throw ConfigError("reference '" + std::string(reference) +
                      "': config must be 'default', 'tuned' or "
                      "'tuned_ensembled'");
  }
}

void EvalTable::set(const std::string& entry, const std::string& dataset_id,
                    double error, bool imputed) {
  cells_[entry][dataset_id] = EvalCell{error, imputed};
}

std::optional<EvalCell> EvalTable::get(const std::string& entry,
                                       const std::string& dataset_id) const {
  auto e = cells_.find(entry);
  if (e == cells_.end()) return std::nullopt;
  auto d = e->second.find(dataset_id);
  if (d == e->second.end()) return std::nullopt;
  return d->second;
}

bool EvalTable::contains(const std::string& entry,
                         const std::string& dataset_id) const {
  return get(entry, dataset_id).has_value();
}

std::vector<std::string> EvalTable::entries() const {
  std::vector<std::string> out;
  for (const auto& [entry, row] : cells_) out.push_back(entry);
  return out;
}

std::vector<std::string> EvalTable::datasets() const {
  std::set<std::string> all;
  for (const auto& [entry, row] : cells_) {
    for (const auto& [dataset, cell] : row) all.insert(dataset);
  }
  return {all.begin(), all.end()};
}

std::size_t EvalTable::imputed_count(const std::string& entry) const {
  auto e = cells_.find(entry);
  if (e == cells_.end()) return 0;
  return static_cast<std::size_t>(
      std::count_if(e->second.begin(), e->second.end(),
                    [](const auto& kv) { return kv.second.imputed; }));
}

std::size_t EvalTable::size() const {
  std::size_t n = 0;
  for (const auto& [entry, row] : cells_) n += row.size();
  return n;
}

EvalTable EvalTable::select(std::span<const std::string> entries) const {
  EvalTable out;
  for (const auto& entry : entries) {
    auto it = cells_.find(entry);
    if (it != cells_.end()) out.cells_[entry] = it->second;
  }
  return out;
}

EvalTable impute_missing(const EvalTable& table,
                         const std::string& reference_entry) {
  const auto datasets = table.datasets();
  const auto& cells = table.cells();
  auto ref = cells.find(reference_entry);
  for (const auto& dataset : datasets) {
    if (ref == cells.end() || !ref->second.count(dataset)) {
      throw InputError("reference '" + reference_entry +
                       "' has no result on dataset '" + dataset + "'");
    }
  }
  EvalTable out = table;
  for (const auto& [entry, row] : cells) {
    for (const auto& dataset : datasets) {
      if (!row.count(dataset)) {
        out.set(entry, dataset, ref->second.at(dataset).error, true);
      }
    }
  }
  return out;
}

ErrorMatrix::ErrorMatrix(std::vector<std::string> entries,
                         std::vector<std::string> datasets,
                         std::vector<double> errors)
    : entries_(std::move(entries)),
      datasets_(std::move(datasets)),
      errors_(std::move(errors)) {
  if (errors_.size() != entries_.size() * datasets_.size()) {
    throw InputError("error matrix has " + std::to_string(errors_.size()) +
                     " values for " + std::to_string(entries_.size()) + "x" +
                     std::to_string(datasets_.size()) + " cells");
  }
}

ErrorMatrix ErrorMatrix::from_table(const EvalTable& table) {
  std::vector<std::string> entries = table.entries();
  std::vector<std::string> datasets = table.datasets();
  std::vector<double> errors;
  errors.reserve(entries.size() * datasets.size());
  for (const auto& entry : entries) {
    for (const auto& dataset : datasets) {
      auto cell = table.get(entry, dataset);
      if (!cell) {
        throw InputError("'" + entry + "' has no result on dataset '" +
                         dataset + "' (impute or filter datasets first)");
      }
      errors.push_back(cell->error);
    }
  }
  return ErrorMatrix(std::move(entries), std::move(datasets),
                     std::move(errors));
}

std::vector<double> ErrorMatrix::column(std::size_t dataset) const {
  std::vector<double> out(entries_.size());
  for (std::size_t e = 0; e < entries_.size(); ++e) out[e] = (*this)(e, dataset);
  return out;
}

std::size_t ErrorMatrix::index_of(const std::string& entry) const {
  auto it = std::find(entries_.begin(), entries_.end(), entry);
  if (it == entries_.end()) {
    throw ConfigError("'" + entry + "' is not in the error table");
  }
  return static_cast<std::size_t>(it - entries_.begin());
}

ErrorMatrix ErrorMatrix::with_columns(
    std::span<const std::size_t> columns) const {
  std::vector<std::string> datasets;
  datasets.reserve(columns.size());
  for (std::size_t c : columns) datasets.push_back(datasets_.at(c));
  std::vector<double> errors;
  errors.reserve(entries_.size() * columns.size());
  for (std::size_t e = 0; e < entries_.size(); ++e) {
    for (std::size_t c : columns) errors.push_back((*this)(e, c));
  }
  return ErrorMatrix(entries_, std::move(datasets), std::move(errors));
}

}  // namespace tabeval
