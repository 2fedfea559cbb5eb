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

// dana_sim run <config> [--out DIR] [--jobs K] [--seed-offset S]
// dana_sim speedup <config> --out FILE
//
// DANA_SIM_OUT sets the default output directory of `run`.
// Exit codes: 0 ok, 1 runtime failure, 2 bad config or usage.

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "dana/config.hpp"
#include "dana/error.hpp"
#include "dana/experiment.hpp"

int main(int argc, char **argv) {
  CLI::App app{"Parameter-server asynchronous SGD simulator"};
  app.require_subcommand(1);

  std::string config_path;
  const char *env_out = std::getenv("DANA_SIM_OUT");
  std::string out_dir = env_out && *env_out ? env_out : "results";
  std::size_t jobs = 1;
  std::uint64_t seed_offset = 0;
  auto *run = app.add_subcommand("run", "Run an algorithm x N x seed sweep");
  run->add_option("config", config_path, "JSON config file")->required();
  run->add_option("--out", out_dir, "Output directory (env DANA_SIM_OUT)");
  run->add_option("--jobs", jobs, "Parallel runs")
      ->check(CLI::PositiveNumber);
  run->add_option("--seed-offset", seed_offset, "Added to every seed");

  std::string table_path;
  auto *speedup =
      app.add_subcommand("speedup", "Write the async/sync speedup table");
  speedup->add_option("config", config_path, "JSON config file")->required();
  speedup->add_option("--out", table_path, "Output CSV file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? dana::kExitOk : dana::kExitConfig;
  }

  dana::ExperimentConfig config;
  try {
    config = dana::load_config(config_path);
  } catch (const dana::config_error &e) {
    std::cerr << "config error: " << e.what() << "\n";
    return dana::kExitConfig;
  }

  try {
    if (*run) {
      dana::ExperimentOptions options;
      options.out_dir = out_dir;
      options.jobs = jobs;
      options.seed_offset = seed_offset;
      const auto report = dana::run_experiment(config, options, std::cerr);
      if (!report.summary.empty()) {
        std::cout << report.summary.string() << "\n";
      }
      return report.exit_code;
    }
    std::ofstream out(table_path, std::ios::binary);
    if (!out) {
      std::cerr << "error: cannot open '" << table_path << "'\n";
      return dana::kExitRuntime;
    }
    dana::emit_speedup_table(config, out);
    out.flush();
    if (!out) {
      std::cerr << "error: write to '" << table_path << "' failed\n";
      return dana::kExitRuntime;
    }
    return dana::kExitOk;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return dana::kExitRuntime;
  }
}
