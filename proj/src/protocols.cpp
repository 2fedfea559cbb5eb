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

#include "dana/protocols.hpp"

#include <array>
#include <cmath>
#include <string>

#include "dana/error.hpp"

namespace dana {

namespace {

constexpr std::array kAlgorithms = {
    Algorithm::asgd,      Algorithm::nag_asgd,  Algorithm::multi_asgd,
    Algorithm::dc_asgd,   Algorithm::lwp,       Algorithm::dana_zero,
    Algorithm::dana_slim, Algorithm::dana_dc,   Algorithm::sequential_nag,
};

} // namespace

std::string_view to_string(Algorithm a) {
  switch (a) {
  case Algorithm::asgd:
    return "asgd";
  case Algorithm::nag_asgd:
    return "nag_asgd";
  case Algorithm::multi_asgd:
    return "multi_asgd";
  case Algorithm::dc_asgd:
    return "dc_asgd";
  case Algorithm::lwp:
    return "lwp";
  case Algorithm::dana_zero:
    return "dana_zero";
  case Algorithm::dana_slim:
    return "dana_slim";
  case Algorithm::dana_dc:
    return "dana_dc";
  case Algorithm::sequential_nag:
    return "sequential_nag";
  }
  return "unknown";
}

Algorithm parse_algorithm(std::string_view name) {
  for (Algorithm a : kAlgorithms) {
    if (to_string(a) == name) {
      return a;
    }
  }
  throw config_error("algorithm",
                     "unsupported algorithm '" + std::string(name) + "'");
}

std::span<const Algorithm> all_algorithms() { return kAlgorithms; }

// --- LagWindow -------------------------------------------------------------

void LagWindow::push(std::uint64_t lag) {
  lags_[next_] = lag;
  next_ = (next_ + 1) % kCapacity;
  if (count_ < kCapacity) {
    ++count_;
  }
}

double LagWindow::mean() const {
  if (count_ == 0) {
    return 0.0;
  }
  // Sum oldest to newest so the result does not depend on ring position.
  const std::size_t start = (next_ + kCapacity - count_) % kCapacity;
  double sum = 0.0;
  for (std::size_t i = 0; i < count_; ++i) {
    sum += static_cast<double>(lags_[(start + i) % kCapacity]);
  }
  return sum / static_cast<double>(count_);
}

// --- MasterState -----------------------------------------------------------

MasterState::MasterState(ParamVector theta0, std::size_t num_workers,
                         ProtocolHyper h)
    : theta(std::move(theta0)), shared_momentum(theta.size()),
      worker_momentum(num_workers, ParamVector(theta.size())),
      aggregate_momentum(theta.size()), last_sent(num_workers, theta),
      lag_history(num_workers), hyper(h) {
  if (num_workers < 1) {
    throw invalid_argument("master: need at least one worker");
  }
  if (theta.empty()) {
    throw invalid_argument("master: empty parameter vector");
  }
}

ParamVector MasterState::aggregate_from_scratch() const {
  ParamVector sum(dim());
  for (const auto &v : worker_momentum) {
    axpy(1.0, v, sum);
  }
  return sum;
}

void MasterState::set_learning_rate(double eta, bool momentum_correction) {
  if (!(eta > 0.0) || !std::isfinite(eta)) {
    throw invalid_argument("learning rate must be positive");
  }
  if (momentum_correction && eta != hyper.eta) {
    const double ratio = hyper.eta / eta;
    scale(ratio, shared_momentum);
    for (auto &v : worker_momentum) {
      scale(ratio, v);
    }
    scale(ratio, aggregate_momentum);
  }
  hyper.eta = eta;
}

void update_aggregate(MasterState &m, std::size_t worker_id,
                      const ParamVector &v_old, const ParamVector &v_new) {
  if (worker_id >= m.num_workers()) {
    throw invalid_argument("update_aggregate: unknown worker " +
                           std::to_string(worker_id));
  }
  require_same_dim("update_aggregate", m.aggregate_momentum, v_old);
  require_same_dim("update_aggregate", m.aggregate_momentum, v_new);
  auto &agg = m.aggregate_momentum;
  for (std::size_t i = 0; i < agg.size(); ++i) {
    agg[i] += v_new[i] - v_old[i];
  }
}

ParamVector delay_compensate(const ParamVector &g, const ParamVector &theta0,
                             const ParamVector &theta_i, double lambda) {
  require_same_dim("delay_compensate", g, theta0);
  require_same_dim("delay_compensate", g, theta_i);
  ParamVector out(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    out[i] = g[i] + lambda * g[i] * g[i] * (theta0[i] - theta_i[i]);
  }
  return out;
}

// --- masters ---------------------------------------------------------------

namespace {

/// Validates the message and records its lag. Returns the lag.
std::uint64_t begin_update(MasterState &m, const UpdateMessage &msg) {
  if (msg.worker_id >= m.num_workers()) {
    throw invalid_argument("master: unknown worker " +
                           std::to_string(msg.worker_id));
  }
  require_same_dim("master payload", m.theta, msg.payload);
  if (msg.dispatched_at > m.update_count) {
    throw invalid_argument("master: dispatched_at " +
                           std::to_string(msg.dispatched_at) +
                           " is ahead of update_count " +
                           std::to_string(m.update_count));
  }
  const std::uint64_t lag = m.update_count - msg.dispatched_at;
  m.lag_history[msg.worker_id].push(lag);
  return lag;
}

ParamVector finish_update(MasterState &m, const UpdateMessage &msg,
                          ParamVector reply) {
  ++m.update_count;
  m.last_sent[msg.worker_id] = reply;
  return reply;
}

/// v^i <- gamma v^i + g, keeping the aggregate in sync; theta -= eta v^i.
void apply_worker_momentum(MasterState &m, std::size_t worker,
                           const ParamVector &g) {
  ParamVector &v = m.worker_momentum[worker];
  ParamVector v_new = linear_combine(m.hyper.gamma, v, 1.0, g);
  update_aggregate(m, worker, v, v_new);
  v = std::move(v_new);
  axpy(-m.hyper.eta, v, m.theta);
}

void apply_shared_momentum(MasterState &m, const ParamVector &g) {
  m.shared_momentum = linear_combine(m.hyper.gamma, m.shared_momentum, 1.0, g);
  axpy(-m.hyper.eta, m.shared_momentum, m.theta);
}

ParamVector dana_lookahead(const MasterState &m) {
  return linear_combine(1.0, m.theta, -m.hyper.eta * m.hyper.gamma,
                        m.aggregate_momentum);
}

} // namespace

ParamVector master_apply_asgd(MasterState &m, const UpdateMessage &msg) {
  begin_update(m, msg);
  axpy(-m.hyper.eta, msg.payload, m.theta);
  return finish_update(m, msg, m.theta);
}

ParamVector master_apply_nag_asgd(MasterState &m, const UpdateMessage &msg) {
  begin_update(m, msg);
  apply_shared_momentum(m, msg.payload);
  return finish_update(m, msg, m.theta);
}

ParamVector master_apply_multi(MasterState &m, const UpdateMessage &msg) {
  begin_update(m, msg);
  apply_worker_momentum(m, msg.worker_id, msg.payload);
  return finish_update(m, msg, m.theta);
}

ParamVector master_apply_dc(MasterState &m, const UpdateMessage &msg) {
  begin_update(m, msg);
  const ParamVector g_hat = delay_compensate(
      msg.payload, m.theta, m.last_sent[msg.worker_id], m.hyper.lambda);
  apply_worker_momentum(m, msg.worker_id, g_hat);
  return finish_update(m, msg, m.theta);
}

ParamVector master_apply_lwp(MasterState &m, const UpdateMessage &msg,
                             std::optional<double> tau) {
  begin_update(m, msg);
  apply_shared_momentum(m, msg.payload);
  const double t = tau ? *tau : m.lag_history[msg.worker_id].mean();
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw invalid_argument("lwp: look-ahead distance must be >= 0");
  }
  return finish_update(m, msg,
                       linear_combine(1.0, m.theta, -t * m.hyper.eta,
                                      m.shared_momentum));
}

ParamVector master_apply_dana_zero(MasterState &m, const UpdateMessage &msg) {
  begin_update(m, msg);
  apply_worker_momentum(m, msg.worker_id, msg.payload);
  return finish_update(m, msg, dana_lookahead(m));
}

ParamVector master_apply_dana_dc(MasterState &m, const UpdateMessage &msg) {
  begin_update(m, msg);
  const ParamVector g_hat = delay_compensate(
      msg.payload, m.theta, m.last_sent[msg.worker_id], m.hyper.lambda);
  apply_worker_momentum(m, msg.worker_id, g_hat);
  return finish_update(m, msg, dana_lookahead(m));
}

ParamVector master_apply(Algorithm a, MasterState &m,
                         const UpdateMessage &msg) {
  switch (a) {
  case Algorithm::asgd:
  case Algorithm::dana_slim:
    return master_apply_asgd(m, msg);
  case Algorithm::nag_asgd:
    return master_apply_nag_asgd(m, msg);
  case Algorithm::multi_asgd:
    return master_apply_multi(m, msg);
  case Algorithm::dc_asgd:
    return master_apply_dc(m, msg);
  case Algorithm::lwp:
    return master_apply_lwp(m, msg);
  case Algorithm::dana_zero:
    return master_apply_dana_zero(m, msg);
  case Algorithm::dana_dc:
    return master_apply_dana_dc(m, msg);
  case Algorithm::sequential_nag:
    break;
  }
  throw invalid_argument("master_apply: " + std::string(to_string(a)) +
                         " has no master");
}

// --- workers ---------------------------------------------------------------

void WorkerState::receive(ParamVector params,
                          std::uint64_t master_update_count) {
  held_params = std::move(params);
  received_at = master_update_count;
}

UpdateMessage make_asgd_message(const WorkerState &w, ParamVector g) {
  require_same_dim("worker gradient", w.held_params, g);
  return UpdateMessage{w.worker_id, std::move(g), w.received_at};
}

UpdateMessage make_dana_slim_message(WorkerState &w, const ParamVector &g,
                                     double gamma) {
  require_same_dim("worker gradient", w.held_params, g);
  w.local_momentum = linear_combine(gamma, w.local_momentum, 1.0, g);
  return UpdateMessage{w.worker_id,
                       linear_combine(gamma, w.local_momentum, 1.0, g),
                       w.received_at};
}

WorkerRound worker_round_asgd(const WorkerState &w, const Objective &obj,
                              std::span<const std::size_t> batch) {
  LossGrad lg = obj.loss_and_grad(w.held_params, batch);
  WorkerRound out;
  out.batch_loss = lg.loss;
  out.message = make_asgd_message(w, lg.grad);
  out.grad = std::move(lg.grad);
  return out;
}

WorkerRound worker_round_dana_slim(WorkerState &w, const Objective &obj,
                                   std::span<const std::size_t> batch,
                                   double gamma) {
  LossGrad lg = obj.loss_and_grad(w.held_params, batch);
  WorkerRound out;
  out.batch_loss = lg.loss;
  out.message = make_dana_slim_message(w, lg.grad, gamma);
  out.grad = std::move(lg.grad);
  return out;
}

// --- replay ----------------------------------------------------------------

void replay_schedule(
    Algorithm a, MasterState &m, std::vector<WorkerState> &workers,
    std::span<const std::size_t> order, const ReplayGradientFn &gradient,
    const std::function<void(const ReplayStep &, const MasterState &)>
        &observer) {
  if (workers.size() != m.num_workers()) {
    throw invalid_argument("replay: worker count does not match master");
  }
  for (std::size_t s = 0; s < order.size(); ++s) {
    const std::size_t id = order[s];
    if (id >= workers.size()) {
      throw invalid_argument("replay: unknown worker " + std::to_string(id));
    }
    WorkerState &w = workers[id];
    ParamVector g = gradient(id, s, w.held_params);
    UpdateMessage msg = a == Algorithm::dana_slim
                            ? make_dana_slim_message(w, g, m.hyper.gamma)
                            : make_asgd_message(w, g);
    ReplayStep step;
    if (observer) {
      step.index = s;
      step.worker_id = id;
      step.lag = m.update_count - msg.dispatched_at;
      step.computed_on = w.held_params;
      step.grad = std::move(g);
      step.master_before = m.theta;
    }
    ParamVector reply = master_apply(a, m, msg);
    if (observer) {
      step.reply = reply;
    }
    w.receive(std::move(reply), m.update_count);
    if (observer) {
      observer(step, m);
    }
  }
}

} // namespace dana
