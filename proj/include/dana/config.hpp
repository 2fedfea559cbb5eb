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

// Experiment configuration: a JSON document describing an algorithm x N x
// seed sweep. Every key is checked; unknown keys and bad values raise
// config_error carrying the offending key path (e.g. "objective.dim").
//
// Minimal document:
//   {"algorithm": "dana_slim", "workers": 8, "objective": "quadratic"}

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dana/exec_model.hpp"
#include "dana/objective.hpp"
#include "dana/protocols.hpp"
#include "dana/schedule.hpp"

namespace dana {

struct ObjectiveSpec {
  ObjectiveKind kind = ObjectiveKind::quadratic;
  /// Training samples (quadratic: number of centers; 0 = one center at 0).
  std::size_t samples = 1024;
  std::size_t dim = 10;
  std::size_t classes = 2;
  double separation = 4.0;
  std::size_t hidden = 16;
  double weight_decay = 0.0;
  /// Classifier training/eval data from CSV instead of synthetic draws.
  std::optional<std::string> csv;
  std::optional<std::string> eval_csv;
  std::size_t eval_samples = 1024;
  /// Quadratic curvature is linspace(curvature_min, curvature_max, dim).
  double curvature_min = 0.01;
  double curvature_max = 0.1;
  /// Standard deviation of the quadratic centers.
  double noise = 1.0;
  double init_scale = 1.0;
  /// When set, every initial parameter equals this value.
  std::optional<double> init_value;

  bool operator==(const ObjectiveSpec &) const = default;
};

struct SpeedupSpec {
  std::vector<std::size_t> workers{1, 2, 4, 8, 16, 32, 64};
  std::size_t iterations = 100000;
  /// Machine populations to average over; 1 homogeneous, 32 heterogeneous
  /// when unset.
  std::optional<std::size_t> populations;
  std::vector<ExecMode> modes{ExecMode::homogeneous, ExecMode::heterogeneous};

  std::size_t populations_for(ExecMode mode) const;

  bool operator==(const SpeedupSpec &) const = default;
};

struct ExperimentConfig {
  std::vector<Algorithm> algorithms;
  std::vector<std::size_t> workers;
  ObjectiveSpec objective;
  ExecModelSpec exec;
  /// base_eta mirrors `eta`; num_workers is set per run.
  Schedule schedule;
  std::size_t batch_size = 128;
  double epochs = 10.0;
  std::vector<std::uint64_t> seeds{0};
  double eta = 0.1;
  double gamma = 0.9;
  double lambda = 2.0;
  SpeedupSpec speedup;

  bool operator==(const ExperimentConfig &) const = default;
};

/// Parses and validates a JSON document. Throws config_error.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::string &path);

/// Serializes every field explicitly; parse_config(emit_config(c)) == c.
std::string emit_config(const ExperimentConfig &config);

/// Cross-field checks (sequential_nag needs N = 1, B <= samples, ...).
void validate(const ExperimentConfig &config);

} // namespace dana
