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
#include <optional>
#include <span>

#include "dana/vec.hpp"

namespace dana {

/// Staleness of one gradient, measured when it reaches the master.
struct GapSample {
  std::uint64_t step = 0; // master update_count at receipt
  std::uint64_t dispatched_at = 0;
  std::uint64_t tau = 0;
  double gap = 0.0;
  std::optional<double> normalized_gap; // empty when grad_norm == 0
  double grad_norm = 0.0;
};

/// RMSE distance ||master - worker||_2 / sqrt(k).
double gap(const ParamVector &master_params, const ParamVector &worker_params);

/// gap / grad_norm; empty (an undefined sample, excluded from aggregates)
/// when grad_norm is zero.
std::optional<double> normalized_gap(double gap_value, double grad_norm);

/// current - dispatched. Throws invalid_argument if negative, which means
/// the schedule is corrupt.
std::uint64_t lag(std::uint64_t dispatched_at,
                  std::uint64_t current_update_count);

/// Two parameter points and the full gradients there.
struct GradientPair {
  ParamVector theta_a;
  ParamVector theta_b;
  ParamVector grad_a;
  ParamVector grad_b;
};

struct LipschitzReport {
  std::size_t pairs = 0;
  std::size_t violations = 0;
  double violation_fraction = 0.0;
  /// Largest ||grad_a - grad_b|| / (L sqrt(k) gap) over pairs with gap > 0.
  double max_ratio = 0.0;
};

/// Checks ||grad_a - grad_b||_2 <= L * sqrt(k) * gap(theta_a, theta_b) on
/// every pair, allowing a 1e-12 relative rounding slack.
LipschitzReport lipschitz_check(std::span<const GradientPair> trajectory,
                                double L);

} // namespace dana
