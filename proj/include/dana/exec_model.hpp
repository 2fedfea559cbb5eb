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

// Batch execution times drawn from the gamma-based CVB model.
//
// alpha = 1 / V^2 and every gamma draw G(alpha, m / alpha) has mean m.
//
//   homogeneous:   time ~ G(alpha_mach, q / alpha_mach), where the task
//                  template q is the task mean mu (or, with
//                  draw_task_template, one draw G(alpha_task, mu/alpha_task)
//                  per run, which only rescales time).
//   heterogeneous: p[j] ~ G(alpha_mach, mu / alpha_mach) once per run for
//                  every machine j, then time ~ G(alpha_task, p[j] /
//                  alpha_task).
//   constant:      every batch takes exactly mu; worker j starts with an
//                  offset of j * mu / N, producing a strict round robin.

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "dana/rng.hpp"

namespace dana {

enum class ExecMode { homogeneous, heterogeneous, constant };

/// How the task mean mu is derived from the batch size B.
enum class MeanFormula {
  batch,   // mu = B
  raw_cvb, // mu = B * V_mach^2, the formula as literally written
};

std::string_view to_string(ExecMode m);
ExecMode parse_exec_mode(std::string_view s);
std::string_view to_string(MeanFormula f);
MeanFormula parse_mean_formula(std::string_view s);

struct ExecModelSpec {
  ExecMode mode = ExecMode::homogeneous;
  double v_task = 0.1;
  /// Defaults to 0.1 (homogeneous) or 0.6 (heterogeneous) when unset.
  std::optional<double> v_mach;
  double batch_size = 128.0;
  MeanFormula mean = MeanFormula::batch;
  bool draw_task_template = false;

  double machine_variation() const;
  double task_mean() const;
  /// Throws invalid_argument on non-positive variations or batch size.
  void validate() const;

  bool operator==(const ExecModelSpec &) const = default;
};

class ExecTimeModel {
public:
  /// Draws the per-run quantities (task template or per-machine means)
  /// from `machine_rng`; machine j's mean is the j-th draw, so a model for
  /// more machines extends one for fewer.
  ExecTimeModel(const ExecModelSpec &spec, std::size_t num_machines,
                SeededRng &machine_rng);

  const ExecModelSpec &spec() const noexcept { return spec_; }
  std::size_t num_machines() const noexcept { return machine_mean_.size(); }

  /// One batch execution time for `machine`. Throws on an unknown machine.
  double sample(std::size_t machine, SeededRng &rng) const;

  /// Analytic mean execution time of `machine`.
  double machine_mean(std::size_t machine) const;
  std::span<const double> machine_means() const noexcept {
    return machine_mean_;
  }

  /// Delay before machine j's first batch starts (non-zero only in
  /// constant mode).
  double initial_offset(std::size_t machine) const;

private:
  ExecModelSpec spec_;
  double alpha_task_;
  double alpha_mach_;
  std::vector<double> machine_mean_;
};

} // namespace dana
