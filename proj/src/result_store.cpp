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

#include "tabeval/result_store.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>
#include <utility>

#include "json.hpp"
#include "tabeval/error.hpp"

namespace tabeval {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

constexpr double kProbabilitySumTolerance = 1e-6;

[[noreturn]] void Invalid(const RecordKey& key, const std::string& rule) {
  throw ValidationError("record " + to_string(key) + ": " + rule);
}

void CheckLabels(const RecordKey& key, const std::vector<double>& labels,
                 const TaskSpec& task, const char* which) {
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const double y = labels[i];
    if (!std::isfinite(y)) {
      Invalid(key, std::string(which) + " label " + std::to_string(i) +
                       " is not finite");
    }
    if (is_classification(task.task_type) &&
        (y != std::floor(y) || y < 0 || y >= task.n_classes)) {
      Invalid(key, std::string(which) + " label " + std::to_string(i) +
                       " is not a class index in [0, " +
                       std::to_string(task.n_classes) + ")");
    }
  }
}

void CheckPredictions(const RecordKey& key, const Predictions& preds,
                      std::size_t n_labels, const TaskSpec& task,
                      const char* which) {
  if (preds.rows() != n_labels) {
    Invalid(key, std::string(which) + " has " + std::to_string(preds.rows()) +
                     " predictions for " + std::to_string(n_labels) +
                     " labels");
  }
  if (n_labels == 0) Invalid(key, std::string(which) + " is empty");
  if (preds.cols() != task.prediction_width()) {
    Invalid(key, std::string(which) + " rows have width " +
                     std::to_string(preds.cols()) + ", expected " +
                     std::to_string(task.prediction_width()));
  }
  for (std::size_t r = 0; r < preds.rows(); ++r) {
    double sum = 0.0;
    for (double p : preds.row(r)) {
      if (!std::isfinite(p)) {
        Invalid(key, std::string(which) + " row " + std::to_string(r) +
                         " is not finite");
      }
      if (is_classification(task.task_type) && (p < 0.0 || p > 1.0)) {
        Invalid(key, std::string(which) + " row " + std::to_string(r) +
                         " has a probability outside [0, 1]");
      }
      sum += p;
    }
    if (is_classification(task.task_type) &&
        std::abs(sum - 1.0) > kProbabilitySumTolerance) {
      std::ostringstream msg;
      msg << which << " row " << r << " sums to " << std::setprecision(17)
          << sum << ", not 1";
      Invalid(key, msg.str());
    }
  }
}

// JSON field access with schema errors reported at file:line.
class LineReader {
 public:
  LineReader(const std::string& file, std::size_t line)
      : file_(file), line_(line) {}

  [[noreturn]] void Fail(const std::string& what) const {
    throw ParseError(file_, line_, what);
  }

  const json& Field(const json& obj, const char* name) const {
    if (!obj.is_object()) Fail("expected a JSON object");
    auto it = obj.find(name);
    if (it == obj.end()) Fail(std::string("missing field '") + name + "'");
    return *it;
  }
  std::string String(const json& obj, const char* name) const {
    const json& v = Field(obj, name);
    if (!v.is_string()) Fail(std::string("field '") + name + "' must be a string");
    return v.get<std::string>();
  }
  std::int64_t Int(const json& obj, const char* name) const {
    const json& v = Field(obj, name);
    if (!v.is_number_integer()) {
      Fail(std::string("field '") + name + "' must be an integer");
    }
    return v.get<std::int64_t>();
  }
  std::vector<double> Numbers(const json& obj, const char* name) const {
    const json& v = Field(obj, name);
    if (!v.is_array()) Fail(std::string("field '") + name + "' must be an array");
    std::vector<double> out;
    out.reserve(v.size());
    for (const json& x : v) {
      if (!x.is_number()) {
        Fail(std::string("field '") + name + "' must contain only numbers");
      }
      out.push_back(x.get<double>());
    }
    return out;
  }
  Predictions Preds(const json& obj, const char* name,
                    const TaskSpec& task) const {
    const json& v = Field(obj, name);
    if (!v.is_array()) Fail(std::string("field '") + name + "' must be an array");
    if (task.task_type == TaskType::kRegression) {
      return Predictions(v.size(), 1, Numbers(obj, name));
    }
    const std::size_t width = task.prediction_width();
    std::vector<double> values;
    values.reserve(v.size() * width);
    for (const json& row : v) {
      if (!row.is_array()) {
        Fail(std::string("field '") + name +
             "' must be an array of probability arrays");
      }
      if (row.size() != width) {
        Fail(std::string("field '") + name + "' has a row of width " +
             std::to_string(row.size()) + ", expected " +
             std::to_string(width));
      }
      for (const json& x : row) {
        if (!x.is_number()) {
          Fail(std::string("field '") + name + "' must contain only numbers");
        }
        values.push_back(x.get<double>());
      }
    }
    return Predictions(v.size(), width, std::move(values));
  }

 private:
  const std::string& file_;
  std::size_t line_;
};

std::map<std::string, TaskSpec> LoadManifest(const std::filesystem::path& path,
                                             std::string* version) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open manifest " + path.string());
  const std::string file = path.string();
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    // nlohmann reports a byte offset; convert it into a line number.
    std::ifstream again(path);
    std::string text((std::istreambuf_iterator<char>(again)),
                     std::istreambuf_iterator<char>());
    const auto upto = std::min<std::size_t>(e.byte, text.size());
    const auto line = 1 + std::count(text.begin(), text.begin() + upto, '\n');
    throw ParseError(file, static_cast<std::size_t>(line), e.what());
  }
  LineReader reader(file, 1);
  *version = reader.String(doc, "format_version");
  if (*version != kFormatVersion) {
    throw ConfigError("unsupported format_version '" + *version + "' in " +
                      file);
  }
  const json& tasks = reader.Field(doc, "tasks");
  if (!tasks.is_array()) reader.Fail("field 'tasks' must be an array");
  std::map<std::string, TaskSpec> out;
  for (const json& t : tasks) {
    TaskSpec task;
    task.dataset_id = reader.String(t, "dataset_id");
    try {
      task.task_type = parse_task_type(reader.String(t, "task_type"));
    } catch (const Error& e) {
      reader.Fail(e.what());
    }
    task.n_classes = static_cast<int>(reader.Int(t, "n_classes"));
    task.n_samples = reader.Int(t, "n_samples");
    validate_task(task);
    if (!out.emplace(task.dataset_id, task).second) {
      throw ValidationError("duplicate task '" + task.dataset_id +
                            "' in manifest");
    }
  }
  return out;
}

ordered_json LabelsToJson(const std::vector<double>& labels,
                          const TaskSpec& task) {
  ordered_json out = ordered_json::array();
  for (double y : labels) {
    if (is_classification(task.task_type)) {
      out.push_back(static_cast<std::int64_t>(y));
    } else {
      out.push_back(y);
    }
  }
  return out;
}

ordered_json PredsToJson(const Predictions& preds, const TaskSpec& task) {
  ordered_json out = ordered_json::array();
  for (std::size_t r = 0; r < preds.rows(); ++r) {
    if (task.task_type == TaskType::kRegression) {
      out.push_back(preds(r, 0));
    } else {
      ordered_json row = ordered_json::array();
      for (double p : preds.row(r)) row.push_back(p);
      out.push_back(std::move(row));
    }
  }
  return out;
}

}  // namespace

std::string_view to_string(TaskType type) {
  switch (type) {
    case TaskType::kBinary:
      return "binary";
    case TaskType::kMulticlass:
      return "multiclass";
    case TaskType::kRegression:
      return "regression";
  }
  return "unknown";
}

TaskType parse_task_type(std::string_view name) {
  if (name == "binary") return TaskType::kBinary;
  if (name == "multiclass") return TaskType::kMulticlass;
  if (name == "regression") return TaskType::kRegression;
  throw InputError("unknown task type '" + std::string(name) + "'");
}

bool is_classification(TaskType type) { return type != TaskType::kRegression; }

int expected_repeats(std::int64_t n_samples) {
  return n_samples < kSmallDatasetThreshold ? 10 : 3;
}

int expected_outer_splits(std::int64_t n_samples) {
  return expected_repeats(n_samples) * kOuterFolds;
}

void validate_task(const TaskSpec& task) {
  const auto fail = [&](const std::string& rule) {
    throw ValidationError("task '" + task.dataset_id + "': " + rule);
  };
  if (task.dataset_id.empty()) fail("empty dataset_id");
  if (task.n_samples <= 0) fail("n_samples must be positive");
  switch (task.task_type) {
    case TaskType::kBinary:
      if (task.n_classes != 2) fail("binary tasks need n_classes = 2");
      break;
    case TaskType::kMulticlass:
      if (task.n_classes < 2) fail("multiclass tasks need n_classes >= 2");
      break;
    case TaskType::kRegression:
      if (task.n_classes != 0) fail("regression tasks need n_classes = 0");
      break;
  }
}

std::string to_string(SplitId split) {
  return "r" + std::to_string(split.repeat) + "f" + std::to_string(split.fold);
}

std::vector<SplitId> expected_split_ids(const TaskSpec& task) {
  std::vector<SplitId> out;
  const int repeats = expected_repeats(task.n_samples);
  for (int r = 0; r < repeats; ++r) {
    for (int f = 0; f < kOuterFolds; ++f) out.push_back({r, f});
  }
  return out;
}

Predictions::Predictions(std::size_t rows, std::size_t cols,
                         std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
  if (values_.size() != rows_ * cols_) {
    throw InputError("prediction block has " + std::to_string(values_.size()) +
                     " values, expected " + std::to_string(rows_ * cols_));
  }
}

std::vector<double> Predictions::column(std::size_t c) const {
  std::vector<double> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
  return out;
}

std::string to_string(const RecordKey& key) {
  return "(" + key.dataset_id + ", repeat " + std::to_string(key.split.repeat) +
         ", fold " + std::to_string(key.split.fold) + ", " + key.method + ", " +
         key.config_id + ")";
}

void validate_record(const PredictionRecord& record, const TaskSpec& task) {
  const RecordKey key = record.key();
  if (record.split.repeat < 0 || record.split.fold < 0) {
    Invalid(key, "negative repeat or fold index");
  }
  if (record.method.empty() || record.config_id.empty()) {
    Invalid(key, "empty method or config_id");
  }
  CheckLabels(key, record.y_val, task, "y_val");
  CheckLabels(key, record.y_test, task, "y_test");
  CheckPredictions(key, record.pred_val, record.y_val.size(), task,
                   "pred_val");
  CheckPredictions(key, record.pred_test, record.y_test.size(), task,
                   "pred_test");
}

ResultStore::ResultStore(std::vector<TaskSpec> tasks,
                         std::vector<PredictionRecord> records,
                         std::string source, std::string format_version)
    : records_(std::move(records)),
      source_(std::move(source)),
      format_version_(std::move(format_version)) {
  for (auto& task : tasks) {
    validate_task(task);
    const std::string id = task.dataset_id;
    if (!tasks_.emplace(id, std::move(task)).second) {
      throw ValidationError("duplicate task '" + id + "'");
    }
  }
  for (const auto& record : records_) {
    auto it = tasks_.find(record.dataset_id);
    if (it == tasks_.end()) {
      Invalid(record.key(), "dataset has no task in the manifest");
    }
    validate_record(record, it->second);
  }
  std::sort(records_.begin(), records_.end(),
            [](const PredictionRecord& a, const PredictionRecord& b) {
              return a.key() < b.key();
            });
  for (std::size_t i = 1; i < records_.size(); ++i) {
    if (records_[i - 1].key() == records_[i].key()) {
      Invalid(records_[i].key(), "duplicate record key");
    }
  }
  // All configs of a method must cover the same outer splits.
  std::size_t begin = 0;
  while (begin < records_.size()) {
    std::size_t end = begin;
    const auto& first = records_[begin];
    while (end < records_.size() &&
           records_[end].dataset_id == first.dataset_id &&
           records_[end].method == first.method) {
      ++end;
    }
    std::map<std::string, std::vector<SplitId>> by_config;
    for (std::size_t i = begin; i < end; ++i) {
      by_config[records_[i].config_id].push_back(records_[i].split);
    }
    const auto& [ref_config, ref_splits] = *by_config.begin();
    for (const auto& [config, splits] : by_config) {
      if (splits != ref_splits) {
        throw ValidationError(
            "ragged hyperparameter coverage for (" + first.dataset_id + ", " +
            first.method + "): config '" + config +
            "' covers different outer splits than config '" + ref_config +
            "'");
      }
    }
    begin = end;
  }
}

const TaskSpec& ResultStore::task(const std::string& dataset_id) const {
  auto it = tasks_.find(dataset_id);
  if (it == tasks_.end()) {
    throw InputError("unknown dataset '" + dataset_id + "'");
  }
  return it->second;
}

std::vector<std::string> ResultStore::datasets() const {
  std::vector<std::string> out;
  for (const auto& [id, task] : tasks_) out.push_back(id);
  return out;
}

std::vector<std::string> ResultStore::methods() const {
  std::set<std::string> names;
  for (const auto& r : records_) names.insert(r.method);
  return {names.begin(), names.end()};
}

std::vector<std::string> ResultStore::methods_for(
    const std::string& dataset_id) const {
  std::vector<std::string> out;
  for (const auto& r : records_) {
    if (r.dataset_id == dataset_id &&
        (out.empty() || out.back() != r.method)) {
      out.push_back(r.method);
    }
  }
  return out;
}

std::vector<std::string> ResultStore::configs(const std::string& dataset_id,
                                              const std::string& method) const {
  std::vector<std::string> out;
  auto it = std::lower_bound(
      records_.begin(), records_.end(), std::tie(dataset_id, method),
      [](const PredictionRecord& r, const auto& key) {
        return std::tie(r.dataset_id, r.method) < key;
      });
  for (; it != records_.end() && it->dataset_id == dataset_id &&
         it->method == method;
       ++it) {
    if (out.empty() || out.back() != it->config_id) out.push_back(it->config_id);
  }
  return out;
}

std::vector<SplitId> ResultStore::splits(const std::string& dataset_id,
                                         const std::string& method) const {
  std::vector<SplitId> out;
  auto it = std::lower_bound(
      records_.begin(), records_.end(), std::tie(dataset_id, method),
      [](const PredictionRecord& r, const auto& key) {
        return std::tie(r.dataset_id, r.method) < key;
      });
  if (it == records_.end()) return out;
  const std::string config = it->config_id;
  for (; it != records_.end() && it->dataset_id == dataset_id &&
         it->method == method && it->config_id == config;
       ++it) {
    out.push_back(it->split);
  }
  return out;
}

bool ResultStore::has(const std::string& dataset_id,
                      const std::string& method) const {
  return !splits(dataset_id, method).empty();
}

const PredictionRecord* ResultStore::find(const RecordKey& key) const {
  auto it = std::lower_bound(
      records_.begin(), records_.end(), key,
      [](const PredictionRecord& r, const RecordKey& k) { return r.key() < k; });
  if (it == records_.end() || it->key() != key) return nullptr;
  return &*it;
}

std::vector<const PredictionRecord*> ResultStore::records_for(
    const std::string& dataset_id, const std::string& method,
    SplitId split) const {
  std::vector<const PredictionRecord*> out;
  for (const auto& config : configs(dataset_id, method)) {
    if (const auto* r = find({dataset_id, method, config, split})) {
      out.push_back(r);
    }
  }
  return out;
}

ResultStore ResultStore::filtered(
    const std::function<bool(const PredictionRecord&)>& keep) const {
  std::vector<TaskSpec> tasks;
  for (const auto& [id, task] : tasks_) tasks.push_back(task);
  std::vector<PredictionRecord> records;
  for (const auto& r : records_) {
    if (keep(r)) records.push_back(r);
  }
  return ResultStore(std::move(tasks), std::move(records), source_,
                     format_version_);
}

ResultStore ResultStore::with_datasets(
    std::span<const std::string> dataset_ids) const {
  const std::set<std::string> wanted(dataset_ids.begin(), dataset_ids.end());
  std::vector<TaskSpec> tasks;
  for (const auto& id : wanted) tasks.push_back(task(id));
  std::vector<PredictionRecord> records;
  for (const auto& r : records_) {
    if (wanted.count(r.dataset_id)) records.push_back(r);
  }
  return ResultStore(std::move(tasks), std::move(records), source_,
                     format_version_);
}

ResultStore load_store(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  const fs::path manifest = dir / "tasks.json";
  if (!fs::is_regular_file(manifest)) {
    throw ConfigError("no tasks.json manifest in " + dir.string());
  }
  std::string version;
  std::map<std::string, TaskSpec> tasks = LoadManifest(manifest, &version);

  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".jsonl") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) {
    throw ConfigError("no *.jsonl record files in " + dir.string());
  }

  std::vector<PredictionRecord> records;
  for (const auto& path : files) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path.string());
    const std::string file = path.string();
    std::string text;
    std::size_t line_no = 0;
    while (std::getline(in, text)) {
      ++line_no;
      if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
      json doc;
      try {
        doc = json::parse(text);
      } catch (const json::parse_error& e) {
        throw ParseError(file, line_no, e.what());
      }
      LineReader reader(file, line_no);
      PredictionRecord record;
      record.dataset_id = reader.String(doc, "dataset_id");
      record.split.repeat = static_cast<int>(reader.Int(doc, "repeat_idx"));
      record.split.fold = static_cast<int>(reader.Int(doc, "fold_idx"));
      record.method = reader.String(doc, "method");
      record.config_id = reader.String(doc, "config_id");
      auto task = tasks.find(record.dataset_id);
      if (task == tasks.end()) {
        Invalid(record.key(), "dataset has no task in the manifest (" + file +
                                  ":" + std::to_string(line_no) + ")");
      }
      record.y_val = reader.Numbers(doc, "y_val");
      record.pred_val = reader.Preds(doc, "pred_val", task->second);
      record.y_test = reader.Numbers(doc, "y_test");
      record.pred_test = reader.Preds(doc, "pred_test", task->second);
      records.push_back(std::move(record));
    }
  }
  std::vector<TaskSpec> task_list;
  for (auto& [id, task] : tasks) task_list.push_back(std::move(task));
  return ResultStore(std::move(task_list), std::move(records), dir.string(),
                     version);
}

void write_store(const ResultStore& store, const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  {
    ordered_json manifest;
    manifest["format_version"] = std::string(kFormatVersion);
    manifest["tasks"] = ordered_json::array();
    for (const auto& [id, task] : store.tasks()) {
      ordered_json t;
      t["dataset_id"] = task.dataset_id;
      t["task_type"] = std::string(to_string(task.task_type));
      t["n_classes"] = task.n_classes;
      t["n_samples"] = task.n_samples;
      manifest["tasks"].push_back(std::move(t));
    }
    std::ofstream out(dir / "tasks.json");
    out << manifest.dump(2) << '\n';
    if (!out) throw ConfigError("cannot write " + (dir / "tasks.json").string());
  }
  std::size_t file_index = 0;
  for (const auto& [id, task] : store.tasks()) {
    std::ostringstream name;
    name << "records-" << std::setw(3) << std::setfill('0') << file_index++
         << ".jsonl";
    const fs::path path = dir / name.str();
    std::ofstream out(path);
    for (const auto& r : store.records()) {
      if (r.dataset_id != id) continue;
      ordered_json doc;
      doc["dataset_id"] = r.dataset_id;
      doc["repeat_idx"] = r.split.repeat;
      doc["fold_idx"] = r.split.fold;
      doc["method"] = r.method;
      doc["config_id"] = r.config_id;
      doc["y_val"] = LabelsToJson(r.y_val, task);
      doc["pred_val"] = PredsToJson(r.pred_val, task);
      doc["y_test"] = LabelsToJson(r.y_test, task);
      doc["pred_test"] = PredsToJson(r.pred_test, task);
      out << doc.dump() << '\n';
    }
    if (!out) throw ConfigError("cannot write " + path.string());
  }
}

std::vector<SplitReportEntry> validate_splits(const ResultStore& store) {
  std::vector<SplitReportEntry> report;
  for (const auto& [id, task] : store.tasks()) {
    const std::vector<SplitId> expected = expected_split_ids(task);
    for (const auto& method : store.methods_for(id)) {
      SplitReportEntry entry{id, method, {}, {}};
      // Ragged coverage is rejected at construction, so the first config's
      // split set stands for all of them.
      const std::vector<SplitId> present = store.splits(id, method);
      std::set_difference(expected.begin(), expected.end(), present.begin(),
                          present.end(), std::back_inserter(entry.missing));
      std::set_difference(present.begin(), present.end(), expected.begin(),
                          expected.end(), std::back_inserter(entry.unexpected));
      if (!entry.missing.empty() || !entry.unexpected.empty()) {
        report.push_back(std::move(entry));
      }
    }
  }
  return report;
}

}  // namespace tabeval
