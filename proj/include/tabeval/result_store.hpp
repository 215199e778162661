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

// On-disk artifact format and the validated, indexed record collection.
//
// A store directory holds `tasks.json` (the task manifest) and any number of
// `*.jsonl` record files. Each record carries, for one (dataset, outer split,
// method, config), the concatenated out-of-fold validation predictions and the
// fold-averaged test predictions, together with their labels.

#ifndef TABEVAL_RESULT_STORE_HPP_
#define TABEVAL_RESULT_STORE_HPP_

#include <compare>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

namespace tabeval {

inline constexpr std::string_view kFormatVersion = "1";
inline constexpr std::string_view kDefaultConfig = "default";
// Datasets below this many samples get 10 repeats of 3-fold outer CV,
// everything else 3 repeats.
inline constexpr std::int64_t kSmallDatasetThreshold = 2500;
inline constexpr int kOuterFolds = 3;

enum class TaskType { kBinary, kMulticlass, kRegression };

std::string_view to_string(TaskType type);
TaskType parse_task_type(std::string_view name);
bool is_classification(TaskType type);

int expected_repeats(std::int64_t n_samples);
int expected_outer_splits(std::int64_t n_samples);

struct TaskSpec {
  std::string dataset_id;
  TaskType task_type = TaskType::kBinary;
  int n_classes = 2;
  std::int64_t n_samples = 0;

  int expected_outer_splits() const {
    return tabeval::expected_outer_splits(n_samples);
  }
  // Width of a prediction row: class count, or 1 for regression.
  std::size_t prediction_width() const {
    return task_type == TaskType::kRegression
               ? 1
               : static_cast<std::size_t>(n_classes);
  }
  bool operator==(const TaskSpec&) const = default;
};

// Throws ValidationError if the task violates its invariants.
void validate_task(const TaskSpec& task);

struct SplitId {
  int repeat = 0;
  int fold = 0;
  auto operator<=>(const SplitId&) const = default;
};

std::string to_string(SplitId split);
// All (repeat, fold) pairs a task is expected to cover, in order.
std::vector<SplitId> expected_split_ids(const TaskSpec& task);

// Row-major block of predictions. Classification rows are per-class
// probabilities; regression uses a single column.
class Predictions {
 public:
  Predictions() = default;
  Predictions(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), values_(rows * cols, 0.0) {}
  Predictions(std::size_t rows, std::size_t cols, std::vector<double> values);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0; }

  double operator()(std::size_t r, std::size_t c) const {
    return values_[r * cols_ + c];
  }
  double& operator()(std::size_t r, std::size_t c) {
    return values_[r * cols_ + c];
  }
  std::span<const double> row(std::size_t r) const {
    return {values_.data() + r * cols_, cols_};
  }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }
  // Copy of column c.
  std::vector<double> column(std::size_t c) const;

  bool same_shape(const Predictions& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }
  bool operator==(const Predictions&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
};

struct RecordKey {
  std::string dataset_id;
  std::string method;
  std::string config_id;
  SplitId split;
  auto operator<=>(const RecordKey&) const = default;
};

std::string to_string(const RecordKey& key);

struct PredictionRecord {
  std::string dataset_id;
  SplitId split;
  std::string method;
  std::string config_id;
  std::vector<double> y_val;
  Predictions pred_val;
  std::vector<double> y_test;
  Predictions pred_test;

  RecordKey key() const { return {dataset_id, method, config_id, split}; }
  bool operator==(const PredictionRecord&) const = default;
};

// Throws ValidationError naming the record if shapes, labels or probability
// rows are inconsistent with the task.
void validate_record(const PredictionRecord& record, const TaskSpec& task);

// Immutable after construction; safe for concurrent readers.
class ResultStore {
 public:
  ResultStore() = default;
  // Validates every invariant (known task per record, unique keys, record
  // shapes, identical split coverage across configs of one method) and
  // sorts records by key. Throws ValidationError on the first violation.
  ResultStore(std::vector<TaskSpec> tasks, std::vector<PredictionRecord> records,
              std::string source = {},
              std::string format_version = std::string(kFormatVersion));

  const std::map<std::string, TaskSpec>& tasks() const { return tasks_; }
  const TaskSpec& task(const std::string& dataset_id) const;
  std::span<const PredictionRecord> records() const { return records_; }
  const std::string& source() const { return source_; }
  const std::string& format_version() const { return format_version_; }

  std::vector<std::string> datasets() const;
  std::vector<std::string> methods() const;
  std::vector<std::string> methods_for(const std::string& dataset_id) const;
  std::vector<std::string> configs(const std::string& dataset_id,
                                   const std::string& method) const;
  // Split set shared by all configs of the method on the dataset.
  std::vector<SplitId> splits(const std::string& dataset_id,
                              const std::string& method) const;
  bool has(const std::string& dataset_id, const std::string& method) const;

  // nullptr when absent.
  const PredictionRecord* find(const RecordKey& key) const;
  // Records of every config of `method` on one split, ordered by config id.
  std::vector<const PredictionRecord*> records_for(
      const std::string& dataset_id, const std::string& method,
      SplitId split) const;

  // New store keeping only the records for which keep() is true; tasks are
  // kept unchanged.
  ResultStore filtered(
      const std::function<bool(const PredictionRecord&)>& keep) const;
  // New store restricted to the given datasets (tasks and records).
  ResultStore with_datasets(std::span<const std::string> dataset_ids) const;

  bool operator==(const ResultStore& other) const {
    return tasks_ == other.tasks_ && records_ == other.records_;
  }

 private:
  std::map<std::string, TaskSpec> tasks_;
  std::vector<PredictionRecord> records_;
  std::string source_;
  std::string format_version_;
};

// Reads `tasks.json` plus every `*.jsonl` file (in filename order) under
// `dir`. Throws ConfigError if the manifest is missing, ParseError with file
// and line on malformed input, ValidationError on invariant violations.
ResultStore load_store(const std::filesystem::path& dir);

// Writes the store in the artifact format: `tasks.json` plus one
// `records-NNN.jsonl` per dataset. Creates `dir` if needed.
void write_store(const ResultStore& store, const std::filesystem::path& dir);

struct SplitReportEntry {
  std::string dataset_id;
  std::string method;
  std::vector<SplitId> missing;
  std::vector<SplitId> unexpected;
  bool operator==(const SplitReportEntry&) const = default;
};

// Every (dataset, method) whose split set differs from the task's expected
// outer splits. Empty means complete coverage.
std::vector<SplitReportEntry> validate_splits(const ResultStore& store);

}  // namespace tabeval

#endif  // TABEVAL_RESULT_STORE_HPP_
