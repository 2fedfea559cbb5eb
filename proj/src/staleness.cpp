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

#include "dana/staleness.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dana/error.hpp"

namespace dana {

double gap(const ParamVector &master_params,
           const ParamVector &worker_params) {
  require_same_dim("gap", master_params, worker_params);
  if (master_params.empty()) {
    throw invalid_argument("gap: empty vectors");
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < master_params.size(); ++i) {
    const double d = master_params[i] - worker_params[i];
    acc += d * d;
  }
  return std::sqrt(acc / static_cast<double>(master_params.size()));
}

std::optional<double> normalized_gap(double gap_value, double grad_norm) {
  if (!(grad_norm > 0.0)) {
    return std::nullopt;
  }
  return gap_value / grad_norm;
}

std::uint64_t lag(std::uint64_t dispatched_at,
                  std::uint64_t current_update_count) {
  if (current_update_count < dispatched_at) {
    throw invalid_argument("lag: update count " +
                           std::to_string(current_update_count) +
                           " precedes dispatch at " +
                           std::to_string(dispatched_at));
  }
  return current_update_count - dispatched_at;
}

LipschitzReport lipschitz_check(std::span<const GradientPair> trajectory,
                                double L) {
  constexpr double kSlack = 1e-12;
  LipschitzReport report;
  report.pairs = trajectory.size();
  for (const auto &p : trajectory) {
    const double k = static_cast<double>(p.theta_a.size());
    const double lhs =
        l2_norm(linear_combine(1.0, p.grad_a, -1.0, p.grad_b));
    const double rhs = L * std::sqrt(k) * gap(p.theta_a, p.theta_b);
    if (lhs > rhs * (1.0 + kSlack) + kSlack * 1e-3) {
      ++report.violations;
    }
    if (rhs > 0.0) {
      report.max_ratio = std::max(report.max_ratio, lhs / rhs);
    }
  }
  if (report.pairs > 0) {
    report.violation_fraction = static_cast<double>(report.violations) /
                                static_cast<double>(report.pairs);
  }
  return report;
}

} // namespace dana
