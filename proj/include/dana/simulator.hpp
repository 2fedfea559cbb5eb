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

// Discrete-event simulation of N workers training against one master.
//
// Workers finish batches at times drawn from an ExecTimeModel; the master
// handles completions one at a time in (time, sequence) order. One epoch is
// max(1, M / B) master updates in total, summed over all workers.

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "dana/dataset.hpp"
#include "dana/exec_model.hpp"
#include "dana/objective.hpp"
#include "dana/protocols.hpp"
#include "dana/schedule.hpp"
#include "dana/vec.hpp"

namespace dana {

/// One completion event. Ordered by (time, sequence_no).
struct Event {
  double time = 0.0;
  std::size_t worker_id = 0;
  std::uint64_t sequence_no = 0;

  friend bool operator>(const Event &a, const Event &b) {
    if (a.time != b.time) {
      return a.time > b.time;
    }
    return a.sequence_no > b.sequence_no;
  }
};

/// What the observer sees after each master update. References are valid
/// only during the callback.
struct UpdateTrace {
  std::uint64_t step = 0; // 1-based update count after this update
  std::size_t worker_id = 0;
  std::uint64_t lag = 0;
  double lr = 0.0;
  const ParamVector *computed_on = nullptr;
  const ParamVector *grad = nullptr;
  const ParamVector *master_before = nullptr;
  const ParamVector *master_after = nullptr;
  const ParamVector *reply = nullptr;
  /// Null for sequential_nag.
  const MasterState *master = nullptr;
};

struct SimConfig {
  Algorithm algorithm = Algorithm::asgd;
  std::size_t workers = 1;
  std::shared_ptr<const Objective> objective;
  /// Held-out set for eval_loss; the training data when null.
  std::shared_ptr<const Dataset> eval_data;
  /// batch_size below overrides exec.batch_size.
  ExecModelSpec exec;
  /// num_workers is taken from `workers`.
  Schedule schedule;
  double gamma = 0.9;
  double lambda = 2.0;
  std::size_t batch_size = 128;
  double epochs = 1.0;
  std::uint64_t seed = 0;
  double init_scale = 1.0;
  std::optional<ParamVector> initial_params;
  std::function<void(const UpdateTrace &)> observer;
};

/// One CSV row. Update rows carry lag/gap and the batch loss as
/// train_loss; evaluation rows (epoch boundaries) carry full-data losses.
struct MetricsRecord {
  double sim_time = 0.0;
  double epoch = 0.0;
  std::uint64_t step = 0;
  std::optional<std::uint64_t> lag;
  std::optional<double> gap;
  std::optional<double> normalized_gap;
  double lr = 0.0;
  std::optional<double> train_loss;
  std::optional<double> eval_loss;
  bool diverged = false;
  bool is_eval = false;
};

struct SimResult {
  std::vector<MetricsRecord> records;
  bool diverged = false;
  ParamVector final_params;
  std::uint64_t updates = 0;
  double sim_time = 0.0;
  /// Mean gap of the updates inside each (possibly partial) epoch.
  std::vector<double> epoch_mean_gaps;
  /// Mean of epoch_mean_gaps.
  double mean_gap = 0.0;
  std::optional<double> mean_normalized_gap;
  double mean_lag = 0.0;
  std::optional<double> final_train_loss;
  std::optional<double> final_eval_loss;
};

/// Total master updates for `config`: round(epochs * max(1, M / B)).
std::uint64_t total_updates(const SimConfig &config);

/// Throws invalid_argument on an inconsistent config.
void validate(const SimConfig &config);

SimResult run_simulation(const SimConfig &config);

/// Writes header plus one line per record. Empty optionals become empty
/// fields; doubles use the shortest round-trip representation.
void write_metrics_csv(std::ostream &out,
                       std::span<const MetricsRecord> records);

} // namespace dana
