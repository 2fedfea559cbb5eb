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

// Master (parameter server) and worker logic for the asynchronous
// algorithms. Masters are plain functions over a MasterState that the
// caller owns; each call processes exactly one UpdateMessage and returns the
// parameters to send back to that worker.

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "dana/objective.hpp"
#include "dana/vec.hpp"

namespace dana {

enum class Algorithm {
  asgd,
  nag_asgd,
  multi_asgd,
  dc_asgd,
  lwp,
  dana_zero,
  dana_slim,
  dana_dc,
  sequential_nag,
};

std::string_view to_string(Algorithm a);
/// Throws config_error("algorithm", "unsupported algorithm ...").
Algorithm parse_algorithm(std::string_view name);
/// Every algorithm, in declaration order.
std::span<const Algorithm> all_algorithms();

struct ProtocolHyper {
  double eta = 0.1;
  double gamma = 0.9;
  double lambda = 2.0; // delay-compensation strength
};

struct UpdateMessage {
  std::size_t worker_id = 0;
  ParamVector payload;
  /// Master update_count when the worker received the parameters it used.
  std::uint64_t dispatched_at = 0;
};

/// Ring buffer of the most recent lags seen from one worker.
class LagWindow {
public:
  static constexpr std::size_t kCapacity = 32;

  void push(std::uint64_t lag);
  /// Mean of the retained lags; 0 when empty.
  double mean() const;
  std::size_t size() const noexcept { return count_; }

private:
  std::array<std::uint64_t, kCapacity> lags_{};
  std::size_t next_ = 0;
  std::size_t count_ = 0;
};

/// Everything the master keeps between updates.
///
/// Invariant: aggregate_momentum == sum of worker_momentum (maintained
/// incrementally by update_aggregate).
struct MasterState {
  ParamVector theta;
  ParamVector shared_momentum; // NAG-ASGD, LWP
  std::vector<ParamVector> worker_momentum;
  ParamVector aggregate_momentum;
  std::vector<ParamVector> last_sent;
  std::vector<LagWindow> lag_history;
  std::uint64_t update_count = 0;
  ProtocolHyper hyper;

  MasterState(ParamVector theta0, std::size_t num_workers,
              ProtocolHyper hyper);

  std::size_t num_workers() const noexcept { return worker_momentum.size(); }
  std::size_t dim() const noexcept { return theta.size(); }

  /// Full O(N k) recomputation of sum_i v^i, for checking the aggregate.
  ParamVector aggregate_from_scratch() const;

  /// Changes eta. With momentum correction every momentum buffer is scaled
  /// by eta_old / eta_new so eta * v is continuous across the change.
  void set_learning_rate(double eta, bool momentum_correction);
};

/// v0 <- v0 - v_old + v_new for one worker; O(k) regardless of N.
void update_aggregate(MasterState &m, std::size_t worker_id,
                      const ParamVector &v_old, const ParamVector &v_new);

/// g + lambda * g ⊙ g ⊙ (theta0 - theta_i).
ParamVector delay_compensate(const ParamVector &g, const ParamVector &theta0,
                             const ParamVector &theta_i, double lambda);

// Each master_apply_* validates the message (known worker, dimension k,
// dispatched_at <= update_count), applies it, increments update_count by
// one, records the reply in last_sent and returns the reply.

ParamVector master_apply_asgd(MasterState &m, const UpdateMessage &msg);
ParamVector master_apply_nag_asgd(MasterState &m, const UpdateMessage &msg);
ParamVector master_apply_multi(MasterState &m, const UpdateMessage &msg);
ParamVector master_apply_dc(MasterState &m, const UpdateMessage &msg);
/// `tau` overrides the look-ahead distance; by default the worker's running
/// mean lag over its last 32 messages (this message included).
ParamVector master_apply_lwp(MasterState &m, const UpdateMessage &msg,
                             std::optional<double> tau = std::nullopt);
ParamVector master_apply_dana_zero(MasterState &m, const UpdateMessage &msg);
ParamVector master_apply_dana_dc(MasterState &m, const UpdateMessage &msg);

/// Dispatches to the master used by `a`. DANA-Slim runs the ASGD master.
/// Throws invalid_argument for sequential_nag, which has no master.
ParamVector master_apply(Algorithm a, MasterState &m,
                         const UpdateMessage &msg);

/// Worker-side state. local_momentum is used only by DANA-Slim workers.
struct WorkerState {
  std::size_t worker_id = 0;
  ParamVector local_momentum;
  ParamVector held_params;
  std::uint64_t received_at = 0;

  WorkerState() = default;
  WorkerState(std::size_t id, ParamVector initial)
      : worker_id(id), local_momentum(initial.size()),
        held_params(std::move(initial)) {}

  /// Stores parameters sent by the master and the master counter at that
  /// moment, which becomes the next message's dispatched_at.
  void receive(ParamVector params, std::uint64_t master_update_count);
};

/// Gradient computed by a worker round, kept for metrics.
struct WorkerRound {
  UpdateMessage message;
  double batch_loss = 0.0;
  ParamVector grad;
};

/// ASGD worker: payload = g.
UpdateMessage make_asgd_message(const WorkerState &w, ParamVector g);
/// DANA-Slim worker: v <- gamma*v + g; payload = gamma*v + g.
UpdateMessage make_dana_slim_message(WorkerState &w, const ParamVector &g,
                                     double gamma);

WorkerRound worker_round_asgd(const WorkerState &w, const Objective &obj,
                              std::span<const std::size_t> batch);
WorkerRound worker_round_dana_slim(WorkerState &w, const Objective &obj,
                                   std::span<const std::size_t> batch,
                                   double gamma);

/// One processed message of a replayed schedule.
struct ReplayStep {
  std::size_t index = 0;
  std::size_t worker_id = 0;
  std::uint64_t lag = 0;
  ParamVector computed_on;   // parameters the worker held
  ParamVector grad;          // raw gradient it produced
  ParamVector master_before; // master parameters at receipt
  ParamVector reply;
};

/// Produces the gradient of `worker` for the `index`-th message of a replay
/// given the parameters the worker holds.
using ReplayGradientFn = std::function<ParamVector(
    std::size_t worker, std::size_t index, const ParamVector &params)>;

/// Drives master and workers through a fixed completion order: `order[s]`
/// is the worker whose message the master processes at step s. Workers
/// must already hold their initial parameters. The observer, if set, sees
/// every step after the master has applied it (and may inspect `m`).
void replay_schedule(
    Algorithm a, MasterState &m, std::vector<WorkerState> &workers,
    std::span<const std::size_t> order, const ReplayGradientFn &gradient,
    const std::function<void(const ReplayStep &, const MasterState &)>
        &observer = {});

} // namespace dana
