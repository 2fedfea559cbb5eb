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

// Throughput model comparing asynchronous and synchronous data-parallel
// training under the gamma execution-time model. Communication is not
// modeled; only batch execution times matter.
//
// For one machine population (machines 0..N-1, means m_j):
//   async speedup = sum_j m_0 / m_j        (every worker runs flat out)
//   sync speedup  = N * m_0 / E[max_j t_j] (each step waits for the slowest)
// Both are relative to machine 0 running alone, so N = 1 gives exactly 1.
// Results are averaged over `populations` independent machine draws, and
// the Monte-Carlo iterations are split evenly between them.

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "dana/exec_model.hpp"

namespace dana {

enum class Paradigm { async, sync };

std::string_view to_string(Paradigm p);

struct SpeedupPoint {
  std::size_t workers = 1;
  double async_speedup = 1.0;
  double sync_speedup = 1.0;
  /// Mean over populations of async / sync.
  double ratio = 1.0;
  /// Monte-Carlo mean of the per-iteration (max) time, averaged over
  /// populations.
  double sync_iteration_time = 0.0;
};

struct SpeedupOptions {
  std::size_t iterations = 100000;
  std::size_t populations = 1;
  std::uint64_t seed = 0;
};

SpeedupPoint speedup_point(std::size_t workers, const ExecModelSpec &spec,
                           const SpeedupOptions &options);

/// Speedup of one paradigm at N workers.
double speedup_model(std::size_t workers, const ExecModelSpec &spec,
                     Paradigm paradigm, const SpeedupOptions &options);

/// One point per worker count, sharing random streams so the sync
/// iteration time is pathwise non-decreasing in N.
std::vector<SpeedupPoint> speedup_curve(std::span<const std::size_t> workers,
                                        const ExecModelSpec &spec,
                                        const SpeedupOptions &options);

} // namespace dana
