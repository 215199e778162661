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

// tabeval command-line tool.
//
// Exit status: 0 on success, 1 when `validate` finds coverage holes, 2 on
// any load, configuration or analysis error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tabeval/error.hpp"
#include "tabeval/pipeline.hpp"
#include "tabeval/report.hpp"
#include "tabeval/result_store.hpp"
#include "tabeval/synth.hpp"

namespace {

using namespace tabeval;

constexpr int kExitHoles = 1;
constexpr int kExitError = 2;

struct RunConfig {
  std::string input;
  std::string output;
  std::string reference = std::string(kDefaultReference);
  int n_bootstrap = kDefaultBootstrapRounds;
  std::optional<std::uint64_t> seed;
  std::string regimes;
  std::string datasets;
  bool impute = false;
  std::string format = "markdown";
  int ges_steps = kDefaultGesSteps;
  bool serial = false;

  // trajectory
  std::string methods;
  std::string grid = "1,full";
  int samples = kDefaultTrajectorySamples;

  // portfolio
  int portfolio_size = kDefaultPortfolioSize;
  std::string held_out;

  // synth
  int n_datasets = 3;
  std::vector<std::string> synth_methods;
  std::int64_t n_samples = 300;
  std::string task_mix = "binary=1";
  double noise = 1.0;
  int n_classes = 3;

  Execution execution() const {
    return serial ? Execution::kSerial : Execution::kParallel;
  }
  std::uint64_t required_seed(const std::string& command) const {
    if (!seed) throw ConfigError(command + " needs --seed");
    return *seed;
  }
};

std::vector<std::string> SplitList(const std::string& text, char sep = ',') {
  std::vector<std::string> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, sep)) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double ParseDouble(const std::string& text, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used == text.size()) return v;
  } catch (const std::exception&) {
  }
  throw ConfigError("invalid number '" + text + "' in " + what);
}

int ParseInt(const std::string& text, const std::string& what) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(text, &used);
    if (used == text.size()) return v;
  } catch (const std::exception&) {
  }
  throw ConfigError("invalid integer '" + text + "' in " + what);
}

void Emit(const RunConfig& cfg, const std::string& text) {
  if (cfg.output.empty() || cfg.output == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(cfg.output, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + cfg.output + "'");
  out << text;
  if (!out) throw ConfigError("write to '" + cfg.output + "' failed");
}

ResultStore LoadInput(const RunConfig& cfg) {
  if (cfg.input.empty()) throw ConfigError("--input is required");
  return filter_datasets(load_store(cfg.input), cfg.datasets);
}

EvaluationOptions EvalOptions(const RunConfig& cfg) {
  EvaluationOptions opts;
  if (!cfg.regimes.empty()) {
    opts.regimes.clear();
    for (const auto& name : SplitList(cfg.regimes)) {
      opts.regimes.push_back(parse_regime(name));
    }
  }
  opts.ges.n_steps = cfg.ges_steps;
  opts.ges.execution = Execution::kSerial;
  opts.execution = cfg.execution();
  return opts;
}

// Test-error table of every entry, imputed when requested.
EvalTable TestTable(const RunConfig& cfg) {
  EvalTable table = evaluate_store(LoadInput(cfg), EvalOptions(cfg)).test;
  if (cfg.impute) table = impute_missing(table, reference_label(cfg.reference));
  return table;
}

Leaderboard BuildBoard(const RunConfig& cfg, const std::string& command) {
  LeaderboardOptions opts;
  opts.reference = cfg.reference;
  opts.impute = cfg.impute;
  opts.bootstrap.n_bootstrap = cfg.n_bootstrap;
  opts.bootstrap.seed = cfg.required_seed(command);
  opts.bootstrap.execution = cfg.execution();
  return build_leaderboard(
      evaluate_store(LoadInput(cfg), EvalOptions(cfg)).test, opts);
}

int CmdValidate(const RunConfig& cfg) {
  ResultStore store;
  try {
    store = LoadInput(cfg);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  const auto report = validate_splits(store);
  Emit(cfg, render_split_report(report));
  return report.empty() ? 0 : kExitHoles;
}

std::vector<int> ParseGrid(const std::string& text) {
  std::vector<int> grid;
  for (const auto& item : SplitList(text)) {
    grid.push_back(item == "full" ? 0 : ParseInt(item, "--grid"));
  }
  if (grid.empty()) throw ConfigError("--grid is empty");
  return grid;
}

int CmdTrajectory(const RunConfig& cfg) {
  TrajectoryRequest req;
  req.methods = SplitList(cfg.methods);
  req.grid = ParseGrid(cfg.grid);
  req.n_samples = cfg.samples;
  req.seed = cfg.required_seed("trajectory");
  req.reference = cfg.reference;
  req.ges.n_steps = cfg.ges_steps;
  req.ges.execution = Execution::kSerial;
  req.execution = cfg.execution();
  Emit(cfg, render_trajectory(build_trajectory_report(LoadInput(cfg), req),
                              parse_format(cfg.format)));
  return 0;
}

int CmdPortfolio(const RunConfig& cfg) {
  GesOptions ges;
  ges.n_steps = cfg.ges_steps;
  ges.execution = Execution::kSerial;
  const auto report =
      build_portfolio_report(LoadInput(cfg), cfg.portfolio_size,
                             SplitList(cfg.held_out), ges, cfg.execution());
  Emit(cfg, render_portfolio(report, parse_format(cfg.format)));
  return 0;
}

TaskMix ParseMix(const std::string& text) {
  TaskMix mix{0.0, 0.0, 0.0};
  for (const auto& item : SplitList(text)) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("--task-mix item '" + item + "' needs TYPE=SHARE");
    }
    const std::string type = item.substr(0, eq);
    const double share = ParseDouble(item.substr(eq + 1), "--task-mix");
    switch (parse_task_type(type)) {
      case TaskType::kBinary: mix.binary = share; break;
      case TaskType::kMulticlass: mix.multiclass = share; break;
      case TaskType::kRegression: mix.regression = share; break;
    }
  }
  return mix;
}

SynthMethod ParseSynthMethod(const std::string& text) {
  const auto parts = SplitList(text, ':');
  if (parts.size() != 3) {
    throw ConfigError("--method '" + text + "' must be NAME:QUALITY:N_CONFIGS");
  }
  return SynthMethod{parts[0], ParseDouble(parts[1], "--method"),
                     ParseInt(parts[2], "--method")};
}

int CmdSynth(const RunConfig& cfg) {
  if (cfg.output.empty()) throw ConfigError("synth needs --output DIR");
  SynthPlan plan;
  plan.seed = cfg.required_seed("synth");
  plan.n_datasets = cfg.n_datasets;
  plan.mix = ParseMix(cfg.task_mix);
  for (const auto& m : cfg.synth_methods) {
    plan.methods.push_back(ParseSynthMethod(m));
  }
  plan.n_samples = cfg.n_samples;
  plan.noise_scale = cfg.noise;
  plan.n_classes = cfg.n_classes;
  write_store(generate(plan, cfg.execution()), cfg.output);
  return 0;
}

int Dispatch(const std::string& command, const RunConfig& cfg) {
  if (command == "validate") return CmdValidate(cfg);
  if (command == "trajectory") return CmdTrajectory(cfg);
  if (command == "portfolio") return CmdPortfolio(cfg);
  if (command == "synth") return CmdSynth(cfg);
  const Format format = parse_format(cfg.format);
  if (command == "leaderboard") {
    Emit(cfg, render_leaderboard(BuildBoard(cfg, command), format));
  } else if (command == "elo") {
    Emit(cfg, render_elo(BuildBoard(cfg, command), format));
  } else if (command == "winrate") {
    Emit(cfg, render_winrate(
                  winrate_matrix(ErrorMatrix::from_table(TestTable(cfg))),
                  format));
  } else if (command == "cdd") {
    Emit(cfg, render_cdd(
                  friedman_nemenyi(ErrorMatrix::from_table(TestTable(cfg))),
                  format));
  }
  return 0;
}

void AddCommon(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--input,-i", cfg.input, "Result store directory");
  sub->add_option("--output,-o", cfg.output, "Output file (default stdout)");
  sub->add_option("--datasets", cfg.datasets,
                  "Comma list of dataset ids, or type:binary|multiclass|regression");
  sub->add_flag("--serial", cfg.serial, "Run every kernel on one thread");
}

void AddAnalysis(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--seed", cfg.seed, "Seed for every random draw");
  sub->add_option("--bootstrap", cfg.n_bootstrap, "Bootstrap rounds")
      ->check(CLI::NonNegativeNumber);
  sub->add_option("--reference", cfg.reference,
                  "METHOD/CONFIG anchored at 1000 Elo");
  sub->add_flag("--impute", cfg.impute,
                "Fill coverage holes with the reference's error");
  sub->add_option("--format", cfg.format, "markdown, csv or json")
      ->check(CLI::IsMember({"markdown", "md", "csv", "json"}));
  sub->add_option("--ges-steps", cfg.ges_steps, "Ensemble selection rounds")
      ->check(CLI::PositiveNumber);
  sub->add_option("--regimes", cfg.regimes,
                  "Comma list of default, tuned, tuned_ensembled");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Evaluation engine for tabular ML benchmark results"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto* validate = app.add_subcommand("validate", "Check split coverage");
  AddCommon(validate, cfg);

  for (const char* name : {"leaderboard", "elo", "winrate", "cdd"}) {
    auto* sub = app.add_subcommand(name, std::string("Emit the ") + name +
                                             " table of every entry");
    AddCommon(sub, cfg);
    AddAnalysis(sub, cfg);
  }

  auto* trajectory =
      app.add_subcommand("trajectory", "Elo versus number of tuned configs");
  AddCommon(trajectory, cfg);
  AddAnalysis(trajectory, cfg);
  trajectory->add_option("--methods", cfg.methods, "Comma list of methods");
  trajectory->add_option("--grid", cfg.grid,
                         "Comma list of config counts; 'full' uses all");
  trajectory->add_option("--samples", cfg.samples, "Draws per grid point")
      ->check(CLI::PositiveNumber);

  auto* portfolio =
      app.add_subcommand("portfolio", "Leave-one-dataset-out portfolios");
  AddCommon(portfolio, cfg);
  AddAnalysis(portfolio, cfg);
  portfolio->add_option("--portfolio-size", cfg.portfolio_size,
                        "Maximum portfolio size")
      ->check(CLI::PositiveNumber);
  portfolio->add_option("--held-out", cfg.held_out,
                        "Comma list of held-out datasets (default all)");

  auto* synth = app.add_subcommand("synth", "Write a synthetic result store");
  synth->add_option("--output,-o", cfg.output, "Store directory")->required();
  synth->add_option("--seed", cfg.seed, "Generator seed");
  synth->add_option("--n-datasets", cfg.n_datasets, "Number of datasets");
  synth->add_option("--method", cfg.synth_methods, "NAME:QUALITY:N_CONFIGS")
      ->required();
  synth->add_option("--n-samples", cfg.n_samples, "Samples per dataset");
  synth->add_option("--task-mix", cfg.task_mix,
                    "Shares, e.g. binary=0.5,multiclass=0.25,regression=0.25");
  synth->add_option("--noise", cfg.noise, "Noise scale");
  synth->add_option("--n-classes", cfg.n_classes, "Classes of multiclass tasks");
  synth->add_flag("--serial", cfg.serial, "Generate on one thread");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitError;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    return Dispatch(command, cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
}
