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

#include "tabeval/synth.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <set>
#include <sstream>

#include "tabeval/error.hpp"
#include "tabeval/rng.hpp"

namespace tabeval {
namespace {

constexpr std::uint64_t kTruthStream = 0x7472757468ULL;
constexpr std::uint64_t kConfigStream = 0x636f6e666967ULL;
// Label noise keeps even a perfect predictor short of zero error.
constexpr double kLabelNoise = 0.5;
constexpr double kMulticlassLogitScale = 1.5;
constexpr double kBinarySharpness = 1.5;

std::string DatasetId(int i) {
  std::ostringstream id;
  id << "ds" << std::setw(3) << std::setfill('0') << i;
  return id.str();
}

std::string ConfigId(int c) {
  return c == 0 ? std::string(kDefaultConfig) : "r" + std::to_string(c);
}

TaskType TypeFor(const TaskMix& mix, int i, int n) {
  const double total = mix.binary + mix.multiclass + mix.regression;
  const double position = (static_cast<double>(i) + 0.5) / n * total;
  if (position < mix.binary) return TaskType::kBinary;
  if (position < mix.binary + mix.multiclass) return TaskType::kMulticlass;
  return TaskType::kRegression;
}

// Noise scale of one config: better methods are quieter, random configs
// spread around the default, and each dataset perturbs it a little.
double NoiseScale(const SynthPlan& plan, const SynthMethod& method, int config,
                  const std::string& dataset_id) {
  const double base = plan.noise_scale * (0.25 + 1.5 * (1.0 - method.quality));
  Xoshiro256 cfg(derive_seed(derive_seed(plan.seed, kConfigStream),
                             hash_name(method.name + "/" + ConfigId(config))));
  const double config_factor = config == 0 ? 1.15 : 0.8 + 0.7 * cfg.uniform();
  Xoshiro256 ds(derive_seed(
      derive_seed(plan.seed, hash_name(dataset_id)),
      hash_name(method.name + "/" + ConfigId(config))));
  const double dataset_factor = 0.9 + 0.2 * ds.uniform();
  return base * config_factor * dataset_factor;
}

struct Truth {
  // Latent signal: rows x width (width 1 for binary/regression, K for
  // multiclass logits).
  std::vector<double> latent;
  std::vector<double> labels;
};

Truth DrawTruth(const TaskSpec& task, std::size_t rows, Xoshiro256& rng) {
  Truth t;
  if (task.task_type == TaskType::kMulticlass) {
    const auto k = static_cast<std::size_t>(task.n_classes);
    t.latent.resize(rows * k);
    for (std::size_t r = 0; r < rows; ++r) {
      std::size_t arg = 0;
      double top = -std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < k; ++c) {
        const double l = kMulticlassLogitScale * rng.normal();
        t.latent[r * k + c] = l;
        const double noisy = l + kLabelNoise * rng.normal();
        if (noisy > top) {
          top = noisy;
          arg = c;
        }
      }
      t.labels.push_back(static_cast<double>(arg));
    }
    // Every class must appear; relabel the first rows if one is absent.
    for (std::size_t c = 0; c < k && c < rows; ++c) {
      if (std::find(t.labels.begin(), t.labels.end(), static_cast<double>(c)) ==
          t.labels.end()) {
        t.labels[c] = static_cast<double>(c);
      }
    }
    return t;
  }
  t.latent.resize(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    const double z = rng.normal();
    t.latent[r] = z;
    const double observed = z + kLabelNoise * rng.normal();
    if (task.task_type == TaskType::kBinary) {
      t.labels.push_back(observed > 0 ? 1.0 : 0.0);
    } else {
      t.labels.push_back(observed);
    }
  }
  if (task.task_type == TaskType::kBinary && rows >= 2) {
    // AUC needs both classes.
    t.labels[0] = 0.0;
    t.labels[1] = 1.0;
  }
  return t;
}

Predictions Predict(const TaskSpec& task, const Truth& truth, double sigma,
                    Xoshiro256& rng) {
  const std::size_t rows = truth.labels.size();
  if (task.task_type == TaskType::kRegression) {
    Predictions p(rows, 1);
    for (std::size_t r = 0; r < rows; ++r) {
      p(r, 0) = truth.latent[r] + sigma * rng.normal();
    }
    return p;
  }
  if (task.task_type == TaskType::kBinary) {
    Predictions p(rows, 2);
    for (std::size_t r = 0; r < rows; ++r) {
      const double score = truth.latent[r] + sigma * rng.normal();
      const double pos = 1.0 / (1.0 + std::exp(-kBinarySharpness * score));
      p(r, 0) = 1.0 - pos;
      p(r, 1) = pos;
    }
    return p;
  }
  const auto k = static_cast<std::size_t>(task.n_classes);
  Predictions p(rows, k);
  std::vector<double> logits(k);
  for (std::size_t r = 0; r < rows; ++r) {
    double top = -std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < k; ++c) {
      logits[c] = truth.latent[r * k + c] + sigma * rng.normal();
      top = std::max(top, logits[c]);
    }
    double sum = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
      logits[c] = std::exp(logits[c] - top);
      sum += logits[c];
    }
    for (std::size_t c = 0; c < k; ++c) p(r, c) = logits[c] / sum;
  }
  return p;
}

}  // namespace

void validate_plan(const SynthPlan& plan) {
  const TaskMix& m = plan.mix;
  if (m.binary < 0 || m.multiclass < 0 || m.regression < 0) {
    throw InputError("synth: task proportions must be non-negative");
  }
  if (std::abs(m.binary + m.multiclass + m.regression - 1.0) > 1e-9) {
    throw InputError("synth: task proportions must sum to 1");
  }
  if (plan.n_datasets < 1) throw InputError("synth: n_datasets must be >= 1");
  if (plan.n_samples < 6) throw InputError("synth: n_samples must be >= 6");
  if (plan.n_classes < 3 && m.multiclass > 0) {
    throw InputError("synth: multiclass tasks need n_classes >= 3");
  }
  if (!(plan.noise_scale > 0)) throw InputError("synth: noise_scale must be > 0");
  if (plan.methods.empty()) throw InputError("synth: no methods");
  std::set<std::string> names;
  for (const auto& method : plan.methods) {
    if (method.name.empty() || method.name.find('/') != std::string::npos) {
      throw InputError("synth: method names must be non-empty and free of '/'");
    }
    if (!names.insert(method.name).second) {
      throw InputError("synth: duplicate method '" + method.name + "'");
    }
    if (!(method.quality >= 0 && method.quality <= 1)) {
      throw InputError("synth: quality of '" + method.name +
                       "' must lie in [0, 1]");
    }
    if (method.n_configs < 1) {
      throw InputError("synth: '" + method.name + "' needs at least 1 config");
    }
  }
}

ResultStore generate(const SynthPlan& plan, Execution execution) {
  validate_plan(plan);
  const auto n = static_cast<std::size_t>(plan.n_datasets);
  std::vector<TaskSpec> tasks(n);
  for (std::size_t i = 0; i < n; ++i) {
    TaskSpec& t = tasks[i];
    t.dataset_id = DatasetId(static_cast<int>(i));
    t.task_type = TypeFor(plan.mix, static_cast<int>(i), plan.n_datasets);
    t.n_classes = t.task_type == TaskType::kBinary       ? 2
                  : t.task_type == TaskType::kMulticlass ? plan.n_classes
                                                         : 0;
    t.n_samples = plan.n_samples;
  }

  const auto test_rows = static_cast<std::size_t>(plan.n_samples / kOuterFolds);
  const auto val_rows = static_cast<std::size_t>(plan.n_samples) - test_rows;
  std::vector<std::vector<PredictionRecord>> per_dataset(n);
  for_each_index(n, execution, [&](std::size_t i) {
    const TaskSpec& task = tasks[i];
    const std::uint64_t dataset_seed =
        derive_seed(plan.seed, hash_name(task.dataset_id));
    for (SplitId split : expected_split_ids(task)) {
      const std::uint64_t split_seed = derive_seed(
          dataset_seed, static_cast<std::uint64_t>(split.repeat * kOuterFolds +
                                                   split.fold));
      Xoshiro256 truth_rng(derive_seed(split_seed, kTruthStream));
      const Truth val = DrawTruth(task, val_rows, truth_rng);
      const Truth test = DrawTruth(task, test_rows, truth_rng);
      for (const auto& method : plan.methods) {
        for (int c = 0; c < method.n_configs; ++c) {
          const std::string config = ConfigId(c);
          const double sigma = NoiseScale(plan, method, c, task.dataset_id);
          Xoshiro256 rng(derive_seed(split_seed,
                                     hash_name(method.name + "/" + config)));
          PredictionRecord r;
          r.dataset_id = task.dataset_id;
          r.split = split;
          r.method = method.name;
          r.config_id = config;
          r.y_val = val.labels;
          r.pred_val = Predict(task, val, sigma, rng);
          r.y_test = test.labels;
          r.pred_test = Predict(task, test, sigma, rng);
          per_dataset[i].push_back(std::move(r));
        }
      }
    }
  });
  std::vector<PredictionRecord> records;
  for (auto& batch : per_dataset) {
    for (auto& r : batch) records.push_back(std::move(r));
  }
  return ResultStore(std::move(tasks), std::move(records), "synth");
}

}  // namespace tabeval
