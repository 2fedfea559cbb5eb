// Copyright 2026 The DANA-Sim Authors. All Rights Reserved.
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

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dana/config.hpp"
#include "dana/simulator.hpp"

namespace dana {

/// Process exit codes of the experiment runner.
enum ExitCode : int { kExitOk = 0, kExitRuntime = 1, kExitConfig = 2 };

struct RunSpec {
  Algorithm algorithm = Algorithm::asgd;
  std::size_t workers = 1;
  std::uint64_t seed = 0;

  bool operator==(const RunSpec &) const = default;
};

/// Cartesian product algorithm x workers x seed, in that nesting order.
std::vector<RunSpec> expand_runs(const ExperimentConfig &config,
                                 std::uint64_t seed_offset = 0);

struct BuiltObjective {
  std::shared_ptr<const Objective> objective;
  std::shared_ptr<const Dataset> eval_data; // null: evaluate on training data
  std::optional<ParamVector> initial_params;
};

/// Builds the objective for one seed. Synthetic data comes from the
/// dataset/eval streams of `seed`.
BuiltObjective build_objective(const ObjectiveSpec &spec, std::uint64_t seed);

SimConfig make_sim_config(const ExperimentConfig &config, const RunSpec &run);

/// "<algorithm>_N<workers>_seed<seed>.csv"
std::string csv_file_name(const RunSpec &run);

struct RunOutcome {
  RunSpec run;
  std::filesystem::path csv;
  bool diverged = false;
  std::uint64_t updates = 0;
  double sim_time = 0.0;
  std::optional<double> final_train_loss;
  std::optional<double> final_eval_loss;
  double mean_gap = 0.0;
  std::optional<double> mean_normalized_gap;
  double mean_lag = 0.0;
  std::optional<std::string> error;
};

struct ExperimentOptions {
  std::filesystem::path out_dir = "results";
  std::size_t jobs = 1;
  std::uint64_t seed_offset = 0;
};

struct ExperimentReport {
  std::vector<RunOutcome> runs;
  std::filesystem::path summary;
  int exit_code = kExitOk;
};

/// Runs every sweep entry (up to `jobs` at once), writes one CSV per run
/// and summary.json. Exit code 1 on any run error or when some
/// (algorithm, N) cell diverged under every seed.
ExperimentReport run_experiment(const ExperimentConfig &config,
                                const ExperimentOptions &options,
                                std::ostream &log);

/// CSV with header "workers,paradigm,mode,speedup"; paradigm is async,
/// sync or ratio (async / sync).
void emit_speedup_table(const ExperimentConfig &config, std::ostream &out);

} // namespace dana
