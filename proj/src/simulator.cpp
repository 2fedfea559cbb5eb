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

#include "dana/simulator.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <ostream>
#include <queue>
#include <string>

#include "dana/error.hpp"
#include "dana/rng.hpp"
#include "dana/seq_optim.hpp"
#include "dana/staleness.hpp"

namespace dana {

namespace {

/// One worker's view of the training set: consecutive batches from a
/// permutation, reshuffled whenever a pass is exhausted.
class DataSampler {
public:
  DataSampler(std::size_t num_samples, std::size_t batch_size, SeededRng rng)
      : order_(num_samples), batch_size_(batch_size), rng_(std::move(rng)) {
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    shuffle();
  }

  std::vector<std::size_t> next() {
    std::vector<std::size_t> batch;
    batch.reserve(batch_size_);
    while (batch.size() < batch_size_) {
      if (pos_ == order_.size()) {
        shuffle();
      }
      batch.push_back(order_[pos_++]);
    }
    return batch;
  }

private:
  void shuffle() {
    for (std::size_t i = order_.size(); i > 1; --i) {
      std::swap(order_[i - 1], order_[rng_.uniform_index(i)]);
    }
    pos_ = 0;
  }

  std::vector<std::size_t> order_;
  std::size_t batch_size_;
  SeededRng rng_;
  std::size_t pos_ = 0;
};

std::size_t steps_per_epoch(const SimConfig &c) {
  return std::max<std::size_t>(1, c.objective->num_samples() / c.batch_size);
}

/// Collects rows and the running gap statistics shared by both loops.
class Recorder {
public:
  Recorder(const SimConfig &c, SimResult &result)
      : config_(c), result_(result), spe_(steps_per_epoch(c)),
        eval_(c.eval_data ? *c.eval_data : c.objective->data()) {}

  double epoch_of(std::uint64_t step) const {
    return static_cast<double>(step) / static_cast<double>(spe_);
  }

  bool at_boundary(std::uint64_t step) const { return step % spe_ == 0; }

  void update_row(double time, std::uint64_t step, std::uint64_t lag,
                  double gap_value, double grad_norm, double lr,
                  double batch_loss, bool diverged) {
    MetricsRecord r;
    r.sim_time = time;
    r.epoch = epoch_of(step);
    r.step = step;
    r.lag = lag;
    r.lr = lr;
    r.train_loss = batch_loss;
    r.diverged = diverged;
    if (!diverged) {
      r.gap = gap_value;
      r.normalized_gap = normalized_gap(gap_value, grad_norm);
      epoch_gap_sum_ += gap_value;
      ++epoch_gap_count_;
      lag_sum_ += static_cast<double>(lag);
      ++lag_count_;
      if (r.normalized_gap) {
        norm_gap_sum_ += *r.normalized_gap;
        ++norm_gap_count_;
      }
      if (at_boundary(step)) {
        close_epoch();
      }
    }
    result_.records.push_back(r);
  }

  /// Returns true when a loss is non-finite; the row is marked diverged.
  bool eval_row(double time, std::uint64_t step, double lr,
                const ParamVector &params) {
    MetricsRecord r;
    r.sim_time = time;
    r.epoch = epoch_of(step);
    r.step = step;
    r.lr = lr;
    r.is_eval = true;
    const double train = config_.objective->mean_loss(
        params, config_.objective->data());
    const double eval = config_.objective->mean_loss(params, eval_);
    r.train_loss = train;
    r.eval_loss = eval;
    if (!std::isfinite(train) || !std::isfinite(eval)) {
      r.diverged = true;
    } else {
      result_.final_train_loss = train;
      result_.final_eval_loss = eval;
    }
    result_.records.push_back(r);
    return r.diverged;
  }

  void finish(std::uint64_t updates, double time, ParamVector params,
              bool diverged) {
    close_epoch();
    result_.updates = updates;
    result_.sim_time = time;
    result_.final_params = std::move(params);
    result_.diverged = diverged;
    if (diverged) {
      result_.final_train_loss.reset();
      result_.final_eval_loss.reset();
    }
    const auto &g = result_.epoch_mean_gaps;
    result_.mean_gap =
        g.empty() ? 0.0
                  : std::accumulate(g.begin(), g.end(), 0.0) /
                        static_cast<double>(g.size());
    if (norm_gap_count_ > 0) {
      result_.mean_normalized_gap =
          norm_gap_sum_ / static_cast<double>(norm_gap_count_);
    }
    result_.mean_lag =
        lag_count_ == 0 ? 0.0 : lag_sum_ / static_cast<double>(lag_count_);
  }

private:
  void close_epoch() {
    if (epoch_gap_count_ == 0) {
      return;
    }
    result_.epoch_mean_gaps.push_back(epoch_gap_sum_ /
                                      static_cast<double>(epoch_gap_count_));
    epoch_gap_sum_ = 0.0;
    epoch_gap_count_ = 0;
  }

  const SimConfig &config_;
  SimResult &result_;
  std::size_t spe_;
  const Dataset &eval_;
  double epoch_gap_sum_ = 0.0;
  std::size_t epoch_gap_count_ = 0;
  double norm_gap_sum_ = 0.0;
  std::size_t norm_gap_count_ = 0;
  double lag_sum_ = 0.0;
  std::size_t lag_count_ = 0;
};

Schedule effective_schedule(const SimConfig &c) {
  Schedule s = c.schedule;
  s.num_workers = c.workers;
  return s;
}

ParamVector initial_params(const SimConfig &c) {
  if (c.initial_params) {
    return *c.initial_params;
  }
  SeededRng rng(c.seed, streams::kInit);
  return c.objective->init_params(rng, c.init_scale);
}

SimResult run_sequential(const SimConfig &c) {
  SimResult result;
  Recorder rec(c, result);
  const Schedule schedule = effective_schedule(c);
  const std::uint64_t total = total_updates(c);

  SeededRng machine_rng(c.seed, streams::kMachines);
  SeededRng exec_rng(c.seed, streams::worker_stream(0));
  ExecModelSpec exec = c.exec;
  exec.batch_size = static_cast<double>(c.batch_size);
  const ExecTimeModel model(exec, 1, machine_rng);
  DataSampler sampler(c.objective->num_samples(), c.batch_size,
                      SeededRng(c.seed, streams::worker_data_stream(0)));

  OptState state(initial_params(c), Hyper{lr_at(schedule, 0.0), c.gamma});
  double now = model.initial_offset(0);
  std::vector<std::size_t> batch = sampler.next();
  now += model.sample(0, exec_rng);
  rec.eval_row(0.0, 0, state.hyper.eta, state.params);

  bool diverged = false;
  std::uint64_t step = 0;
  while (step < total) {
    const double lr = lr_at(schedule, rec.epoch_of(step));
    if (lr != state.hyper.eta) {
      if (schedule.momentum_correction) {
        state.momentum = momentum_correct(state.momentum, state.hyper.eta, lr);
      }
      state.hyper.eta = lr;
    }
    double batch_loss = 0.0;
    const ParamVector before = state.params;
    const NagStep out = nag_step(state, [&](const ParamVector &p) {
      LossGrad lg = c.objective->loss_and_grad(p, batch);
      batch_loss = lg.loss;
      return std::move(lg.grad);
    });
    ++step;
    if (!std::isfinite(batch_loss) || !all_finite(out.grad) ||
        !all_finite(out.state.params)) {
      rec.update_row(now, step, 0, 0.0, 0.0, lr, batch_loss, true);
      diverged = true;
      state = out.state;
      break;
    }
    const double g = gap(before, out.lookahead);
    rec.update_row(now, step, 0, g, l2_norm(out.grad), lr, batch_loss, false);
    state = out.state;
    if (c.observer) {
      UpdateTrace t;
      t.step = step;
      t.lr = lr;
      t.computed_on = &out.lookahead;
      t.grad = &out.grad;
      t.master_before = &before;
      t.master_after = &state.params;
      t.reply = &state.params;
      c.observer(t);
    }
    if ((rec.at_boundary(step) || step == total) &&
        rec.eval_row(now, step, lr, state.params)) {
      diverged = true;
      break;
    }
    batch = sampler.next();
    now += model.sample(0, exec_rng);
  }
  rec.finish(step, now, state.params, diverged);
  return result;
}

SimResult run_async(const SimConfig &c) {
  SimResult result;
  Recorder rec(c, result);
  const Schedule schedule = effective_schedule(c);
  const std::uint64_t total = total_updates(c);
  const std::size_t n = c.workers;
  const bool slim = c.algorithm == Algorithm::dana_slim;

  SeededRng machine_rng(c.seed, streams::kMachines);
  ExecModelSpec exec = c.exec;
  exec.batch_size = static_cast<double>(c.batch_size);
  const ExecTimeModel model(exec, n, machine_rng);

  const ParamVector theta0 = initial_params(c);
  MasterState master(theta0, n,
                     ProtocolHyper{lr_at(schedule, 0.0), c.gamma, c.lambda});
  std::vector<WorkerState> workers;
  std::vector<SeededRng> exec_rngs;
  std::vector<DataSampler> samplers;
  std::vector<std::vector<std::size_t>> batches(n);
  workers.reserve(n);
  exec_rngs.reserve(n);
  samplers.reserve(n);
  std::priority_queue<Event, std::vector<Event>, std::greater<>> queue;
  std::uint64_t seq = 0;
  for (std::size_t i = 0; i < n; ++i) {
    workers.emplace_back(i, theta0);
    exec_rngs.emplace_back(c.seed, streams::worker_stream(i));
    samplers.emplace_back(c.objective->num_samples(), c.batch_size,
                          SeededRng(c.seed, streams::worker_data_stream(i)));
    batches[i] = samplers[i].next();
    queue.push(Event{model.initial_offset(i) + model.sample(i, exec_rngs[i]),
                     i, seq++});
  }
  rec.eval_row(0.0, 0, master.hyper.eta, master.theta);

  bool diverged = false;
  double now = 0.0;
  while (master.update_count < total) {
    const Event ev = queue.top();
    queue.pop();
    now = ev.time;
    WorkerState &w = workers[ev.worker_id];

    const double lr = lr_at(schedule, rec.epoch_of(master.update_count));
    if (lr != master.hyper.eta) {
      const double ratio = master.hyper.eta / lr;
      master.set_learning_rate(lr, schedule.momentum_correction);
      if (slim && schedule.momentum_correction) {
        for (auto &other : workers) {
          scale(ratio, other.local_momentum);
        }
      }
    }

    LossGrad lg = c.objective->loss_and_grad(w.held_params, batches[ev.worker_id]);
    if (!std::isfinite(lg.loss) || !all_finite(lg.grad)) {
      rec.update_row(now, master.update_count + 1, 0, 0.0, 0.0, lr, lg.loss,
                     true);
      diverged = true;
      break;
    }
    const UpdateMessage msg =
        slim ? make_dana_slim_message(w, lg.grad, c.gamma)
             : make_asgd_message(w, lg.grad);
    const std::uint64_t tau = lag(msg.dispatched_at, master.update_count);
    const double g = gap(master.theta, w.held_params);
    std::optional<ParamVector> before;
    if (c.observer) {
      before = master.theta;
    }
    ParamVector reply = master_apply(c.algorithm, master, msg);
    if (!all_finite(master.theta) || !all_finite(reply)) {
      rec.update_row(now, master.update_count, tau, g, 0.0, lr, lg.loss,
                     true);
      diverged = true;
      break;
    }
    rec.update_row(now, master.update_count, tau, g, l2_norm(lg.grad), lr,
                   lg.loss, false);
    if (c.observer) {
      UpdateTrace t;
      t.step = master.update_count;
      t.worker_id = ev.worker_id;
      t.lag = tau;
      t.lr = lr;
      t.computed_on = &w.held_params;
      t.grad = &lg.grad;
      t.master_before = &*before;
      t.master_after = &master.theta;
      t.reply = &reply;
      t.master = &master;
      c.observer(t);
    }
    if ((rec.at_boundary(master.update_count) ||
         master.update_count == total) &&
        rec.eval_row(now, master.update_count, lr, master.theta)) {
      diverged = true;
      break;
    }
    w.receive(std::move(reply), master.update_count);
    batches[ev.worker_id] = samplers[ev.worker_id].next();
    queue.push(
        Event{now + model.sample(ev.worker_id, exec_rngs[ev.worker_id]),
              ev.worker_id, seq++});
  }
  rec.finish(master.update_count, now, master.theta, diverged);
  return result;
}

void append_double(std::string &line, double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  line.append(buf, res.ptr);
}

} // namespace

std::uint64_t total_updates(const SimConfig &c) {
  validate(c);
  const double steps =
      std::round(c.epochs * static_cast<double>(steps_per_epoch(c)));
  return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(steps));
}

void validate(const SimConfig &c) {
  if (!c.objective) {
    throw invalid_argument("simulation: objective is required");
  }
  if (c.workers < 1) {
    throw invalid_argument("simulation: need at least one worker");
  }
  if (c.algorithm == Algorithm::sequential_nag && c.workers != 1) {
    throw invalid_argument("simulation: sequential_nag requires workers = 1");
  }
  if (c.batch_size < 1 || c.batch_size > c.objective->num_samples()) {
    throw invalid_argument("simulation: batch size must be in [1, M]");
  }
  if (!(c.epochs > 0.0) || !std::isfinite(c.epochs)) {
    throw invalid_argument("simulation: epochs must be positive");
  }
  if (!(c.gamma >= 0.0 && c.gamma < 1.0)) {
    throw invalid_argument("simulation: gamma must be in [0, 1)");
  }
  if (!(c.lambda >= 0.0) || !std::isfinite(c.lambda)) {
    throw invalid_argument("simulation: lambda must be >= 0");
  }
  if (c.initial_params && c.initial_params->size() != c.objective->dim()) {
    throw dimension_error("simulation initial_params", c.objective->dim(),
                          c.initial_params->size());
  }
  if (c.eval_data && c.eval_data->dim != c.objective->data().dim) {
    throw dimension_error("simulation eval_data", c.objective->data().dim,
                          c.eval_data->dim);
  }
  effective_schedule(c).validate();
  c.exec.validate();
}

SimResult run_simulation(const SimConfig &config) {
  validate(config);
  if (config.algorithm == Algorithm::sequential_nag) {
    return run_sequential(config);
  }
  return run_async(config);
}

void write_metrics_csv(std::ostream &out,
                       std::span<const MetricsRecord> records) {
  out << "sim_time,epoch,step,lag,gap,normalized_gap,lr,train_loss,"
         "eval_loss,diverged\n";
  std::string line;
  for (const MetricsRecord &r : records) {
    line.clear();
    append_double(line, r.sim_time);
    line += ',';
    append_double(line, r.epoch);
    line += ',';
    line += std::to_string(r.step);
    line += ',';
    if (r.lag) {
      line += std::to_string(*r.lag);
    }
    for (const auto &field : {r.gap, r.normalized_gap}) {
      line += ',';
      if (field) {
        append_double(line, *field);
      }
    }
    line += ',';
    append_double(line, r.lr);
    for (const auto &field : {r.train_loss, r.eval_loss}) {
      line += ',';
      if (field) {
        append_double(line, *field);
      }
    }
    line += r.diverged ? ",1\n" : ",0\n";
    out << line;
  }
}

} // namespace dana
