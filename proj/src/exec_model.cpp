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

#include "dana/exec_model.hpp"

#include <cmath>
#include <string>

#include "dana/error.hpp"

namespace dana {

std::string_view to_string(ExecMode m) {
  switch (m) {
  case ExecMode::homogeneous:
    return "homogeneous";
  case ExecMode::heterogeneous:
    return "heterogeneous";
  case ExecMode::constant:
    return "constant";
  }
  return "unknown";
}

ExecMode parse_exec_mode(std::string_view s) {
  for (ExecMode m : {ExecMode::homogeneous, ExecMode::heterogeneous,
                     ExecMode::constant}) {
    if (to_string(m) == s) {
      return m;
    }
  }
  throw invalid_argument("unknown execution mode '" + std::string(s) + "'");
}

std::string_view to_string(MeanFormula f) {
  return f == MeanFormula::batch ? "batch" : "raw_cvb";
}

MeanFormula parse_mean_formula(std::string_view s) {
  if (s == "batch") {
    return MeanFormula::batch;
  }
  if (s == "raw_cvb") {
    return MeanFormula::raw_cvb;
  }
  throw invalid_argument("unknown mean formula '" + std::string(s) + "'");
}

double ExecModelSpec::machine_variation() const {
  if (v_mach) {
    return *v_mach;
  }
  return mode == ExecMode::heterogeneous ? 0.6 : 0.1;
}

double ExecModelSpec::task_mean() const {
  if (mean == MeanFormula::raw_cvb) {
    const double v = machine_variation();
    return batch_size * v * v;
  }
  return batch_size;
}

void ExecModelSpec::validate() const {
  auto positive = [](double x) { return x > 0.0 && std::isfinite(x); };
  if (!positive(v_task)) {
    throw invalid_argument("exec model: v_task must be positive");
  }
  if (!positive(machine_variation())) {
    throw invalid_argument("exec model: v_mach must be positive");
  }
  if (!positive(batch_size)) {
    throw invalid_argument("exec model: batch size must be positive");
  }
}

ExecTimeModel::ExecTimeModel(const ExecModelSpec &spec,
                             std::size_t num_machines, SeededRng &machine_rng)
    : spec_(spec) {
  spec_.validate();
  if (num_machines < 1) {
    throw invalid_argument("exec model: need at least one machine");
  }
  alpha_task_ = 1.0 / (spec_.v_task * spec_.v_task);
  const double vm = spec_.machine_variation();
  alpha_mach_ = 1.0 / (vm * vm);
  const double mu = spec_.task_mean();

  machine_mean_.assign(num_machines, mu);
  switch (spec_.mode) {
  case ExecMode::homogeneous:
    if (spec_.draw_task_template) {
      const double q = machine_rng.gamma(alpha_task_, mu / alpha_task_);
      machine_mean_.assign(num_machines, q);
    }
    break;
  case ExecMode::heterogeneous:
    for (auto &p : machine_mean_) {
      p = machine_rng.gamma(alpha_mach_, mu / alpha_mach_);
    }
    break;
  case ExecMode::constant:
    break;
  }
}

double ExecTimeModel::machine_mean(std::size_t machine) const {
  if (machine >= machine_mean_.size()) {
    throw invalid_argument("exec model: unknown machine " +
                           std::to_string(machine));
  }
  return machine_mean_[machine];
}

double ExecTimeModel::sample(std::size_t machine, SeededRng &rng) const {
  const double m = machine_mean(machine);
  switch (spec_.mode) {
  case ExecMode::homogeneous:
    return rng.gamma(alpha_mach_, m / alpha_mach_);
  case ExecMode::heterogeneous:
    return rng.gamma(alpha_task_, m / alpha_task_);
  case ExecMode::constant:
    return m;
  }
  return m;
}

double ExecTimeModel::initial_offset(std::size_t machine) const {
  if (spec_.mode != ExecMode::constant) {
    return 0.0;
  }
  return static_cast<double>(machine) * machine_mean(machine) /
         static_cast<double>(machine_mean_.size());
}

} // namespace dana
