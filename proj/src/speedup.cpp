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

#include "dana/speedup.hpp"

#include <algorithm>

#include "dana/error.hpp"
#include "dana/rng.hpp"

namespace dana {

std::string_view to_string(Paradigm p) {
  return p == Paradigm::async ? "async" : "sync";
}

SpeedupPoint speedup_point(std::size_t workers, const ExecModelSpec &spec,
                           const SpeedupOptions &options) {
  if (workers < 1) {
    throw invalid_argument("speedup: need at least one worker");
  }
  if (options.populations < 1 || options.iterations < options.populations) {
    throw invalid_argument(
        "speedup: need populations >= 1 and iterations >= populations");
  }
  const std::size_t per_population = options.iterations / options.populations;
  const double n = static_cast<double>(workers);

  SpeedupPoint point;
  point.workers = workers;
  point.async_speedup = 0.0;
  point.sync_speedup = 0.0;
  point.ratio = 0.0;
  for (std::size_t pop = 0; pop < options.populations; ++pop) {
    const std::uint64_t pop_seed = splitmix64(options.seed) + pop;
    SeededRng machine_rng(pop_seed, streams::kMachines);
    const ExecTimeModel model(spec, workers, machine_rng);

    const double base = model.machine_mean(0);
    double async = 0.0;
    for (double m : model.machine_means()) {
      async += base / m;
    }

    std::vector<SeededRng> rngs;
    rngs.reserve(workers);
    for (std::size_t j = 0; j < workers; ++j) {
      rngs.emplace_back(pop_seed, streams::worker_stream(j));
    }
    double sum_max = 0.0;
    for (std::size_t it = 0; it < per_population; ++it) {
      double slowest = 0.0;
      for (std::size_t j = 0; j < workers; ++j) {
        slowest = std::max(slowest, model.sample(j, rngs[j]));
      }
      sum_max += slowest;
    }
    const double iteration_time =
        sum_max / static_cast<double>(per_population);
    const double sync = n * base / iteration_time;

    point.async_speedup += async;
    point.sync_speedup += sync;
    point.ratio += async / sync;
    point.sync_iteration_time += iteration_time;
  }
  const double pops = static_cast<double>(options.populations);
  point.async_speedup /= pops;
  point.sync_speedup /= pops;
  point.ratio /= pops;
  point.sync_iteration_time /= pops;
  return point;
}

double speedup_model(std::size_t workers, const ExecModelSpec &spec,
                     Paradigm paradigm, const SpeedupOptions &options) {
  const SpeedupPoint p = speedup_point(workers, spec, options);
  return paradigm == Paradigm::async ? p.async_speedup : p.sync_speedup;
}

std::vector<SpeedupPoint> speedup_curve(std::span<const std::size_t> workers,
                                        const ExecModelSpec &spec,
                                        const SpeedupOptions &options) {
  std::vector<SpeedupPoint> out;
  out.reserve(workers.size());
  for (std::size_t n : workers) {
    out.push_back(speedup_point(n, spec, options));
  }
  return out;
}

} // namespace dana
