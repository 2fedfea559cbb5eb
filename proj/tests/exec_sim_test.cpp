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

#include <cmath>
#include <memory>
#include <numeric>
#include <sstream>
#include <vector>

#include <gtest/gtest.h>

#include "dana/error.hpp"
#include "dana/exec_model.hpp"
#include "dana/rng.hpp"
#include "dana/schedule.hpp"
#include "dana/seq_optim.hpp"
#include "dana/simulator.hpp"
#include "dana/speedup.hpp"

namespace dana {
namespace {

// --- execution-time model --------------------------------------------------

struct Stats {
  double mean = 0;
  double above_160 = 0;
};

Stats draw_stats(ExecMode mode, int draws, std::uint64_t seed) {
  ExecModelSpec spec;
  spec.mode = mode;
  SeededRng machines(seed, streams::kMachines);
  // Heterogeneous: one machine per draw so the per-machine factor is
  // sampled too.
  const std::size_t n = mode == ExecMode::heterogeneous ? draws : 1;
  const ExecTimeModel model(spec, n, machines);
  SeededRng rng(seed, streams::worker_stream(0));
  Stats s;
  for (int i = 0; i < draws; ++i) {
    const double t = model.sample(n == 1 ? 0 : i, rng);
    s.mean += t;
    s.above_160 += t > 160.0;
  }
  s.mean /= draws;
  s.above_160 /= draws;
  return s;
}

TEST(ExecModel, HomogeneousStatistics) {
  const Stats s = draw_stats(ExecMode::homogeneous, 200000, 1);
  EXPECT_NEAR(s.mean, 128.0, 1.28);
  EXPECT_NEAR(s.above_160, 0.01, 0.005);
}

TEST(ExecModel, HeterogeneousStatistics) {
  const Stats s = draw_stats(ExecMode::heterogeneous, 200000, 2);
  EXPECT_NEAR(s.mean, 128.0, 1.28 * 2);
  EXPECT_NEAR(s.above_160, 0.279, 0.015);
}

TEST(ExecModel, DefaultsAndMeanFormula) {
  ExecModelSpec spec;
  EXPECT_DOUBLE_EQ(spec.machine_variation(), 0.1);
  spec.mode = ExecMode::heterogeneous;
  EXPECT_DOUBLE_EQ(spec.machine_variation(), 0.6);
  EXPECT_DOUBLE_EQ(spec.task_mean(), 128.0);
  spec.mean = MeanFormula::raw_cvb;
  EXPECT_NEAR(spec.task_mean(), 128.0 * 0.36, 1e-12);
}

TEST(ExecModel, InvalidParametersThrow) {
  SeededRng rng(1, 1);
  ExecModelSpec spec;
  spec.v_task = 0.0;
  EXPECT_THROW(ExecTimeModel(spec, 1, rng), invalid_argument);
  spec = ExecModelSpec{};
  spec.v_mach = -0.1;
  EXPECT_THROW(ExecTimeModel(spec, 1, rng), invalid_argument);
  spec = ExecModelSpec{};
  EXPECT_THROW(ExecTimeModel(spec, 0, rng), invalid_argument);
  const ExecTimeModel ok(ExecModelSpec{}, 2, rng);
  EXPECT_THROW(ok.sample(2, rng), invalid_argument);
  EXPECT_THROW(parse_exec_mode("cloud"), invalid_argument);
  EXPECT_THROW(parse_mean_formula("median"), invalid_argument);
}

TEST(ExecModel, HeterogeneousMachinesFixedAndNested) {
  ExecModelSpec spec;
  spec.mode = ExecMode::heterogeneous;
  SeededRng r4(3, streams::kMachines), r8(3, streams::kMachines);
  const ExecTimeModel four(spec, 4, r4);
  const ExecTimeModel eight(spec, 8, r8);
  for (std::size_t j = 0; j < 4; ++j) {
    EXPECT_EQ(four.machine_mean(j), eight.machine_mean(j));
    EXPECT_GT(four.machine_mean(j), 0.0);
  }
  EXPECT_NE(four.machine_mean(0), four.machine_mean(1));
}

TEST(ExecModel, ConstantModeOffsets) {
  ExecModelSpec spec;
  spec.mode = ExecMode::constant;
  SeededRng rng(1, 1);
  const ExecTimeModel m(spec, 4, rng);
  EXPECT_EQ(m.sample(3, rng), 128.0);
  EXPECT_EQ(m.initial_offset(0), 0.0);
  EXPECT_EQ(m.initial_offset(2), 64.0);
}

TEST(ExecModel, DrawTaskTemplateRescalesAllMachines) {
  ExecModelSpec spec;
  spec.draw_task_template = true;
  SeededRng rng(5, streams::kMachines);
  const ExecTimeModel m(spec, 3, rng);
  EXPECT_NE(m.machine_mean(0), 128.0);
  EXPECT_EQ(m.machine_mean(0), m.machine_mean(2));
}

// --- schedule ---------------------------------------------------------------

TEST(Schedule, WarmupExamples) {
  Schedule s;
  s.num_workers = 8;
  EXPECT_DOUBLE_EQ(lr_at(s, 0.0), 0.0125);
  EXPECT_DOUBLE_EQ(lr_at(s, 5.0), 0.1);
  EXPECT_DOUBLE_EQ(lr_at(s, 40.0), 0.1);
  EXPECT_DOUBLE_EQ(lr_at(s, 2.5), 0.0125 + (0.1 - 0.0125) * 0.5);
}

TEST(Schedule, StepDecay) {
  Schedule s;
  s.num_workers = 4;
  s.decay_epochs = {80, 120};
  EXPECT_DOUBLE_EQ(lr_at(s, 79.99), 0.1);
  EXPECT_NEAR(lr_at(s, 80.0), 0.01, 1e-17);
  EXPECT_NEAR(lr_at(s, 130.0), 0.001, 1e-18);
  EXPECT_THROW(lr_at(s, -1.0), invalid_argument);
}

TEST(Schedule, PiecewiseShape) {
  Schedule s;
  s.num_workers = 16;
  s.decay_epochs = {10};
  double prev = lr_at(s, 0.0);
  for (double e = 0.05; e < 5.0; e += 0.05) {
    const double lr = lr_at(s, e);
    EXPECT_GT(lr, prev);
    prev = lr;
  }
  EXPECT_EQ(lr_at(s, 6.0), lr_at(s, 9.9));
}

TEST(Schedule, Validation) {
  Schedule s;
  s.decay_epochs = {120, 80};
  EXPECT_THROW(s.validate(), invalid_argument);
  s = Schedule{};
  s.num_workers = 0;
  EXPECT_THROW(s.validate(), invalid_argument);
  s = Schedule{};
  s.base_eta = 0.0;
  EXPECT_THROW(s.validate(), invalid_argument);
}

TEST(MomentumCorrection, Examples) {
  EXPECT_EQ(momentum_correct({1, 2}, 0.1, 0.1), ParamVector({1, 2}));
  const ParamVector v = momentum_correct({1}, 0.1, 0.01);
  EXPECT_DOUBLE_EQ(v[0], 10.0);
  EXPECT_DOUBLE_EQ(0.01 * v[0], 0.1 * 1.0);
  EXPECT_EQ(momentum_correct({0, 0}, 0.3, 0.7), ParamVector({0, 0}));
  EXPECT_THROW(momentum_correct({1}, 0.0, 0.1), invalid_argument);
}

// --- speedup model ----------------------------------------------------------

TEST(Speedup, SingleWorkerIsOne) {
  for (ExecMode mode : {ExecMode::homogeneous, ExecMode::heterogeneous}) {
    ExecModelSpec spec;
    spec.mode = mode;
    SpeedupOptions opt;
    opt.iterations = 2000;
    opt.populations = mode == ExecMode::heterogeneous ? 4 : 1;
    const SpeedupPoint p = speedup_point(1, spec, opt);
    EXPECT_DOUBLE_EQ(p.async_speedup, 1.0);
    EXPECT_NEAR(p.sync_speedup, 1.0, 0.01);
    EXPECT_DOUBLE_EQ(speedup_model(1, spec, Paradigm::async, opt), 1.0);
  }
}

TEST(Speedup, HomogeneousAsyncIsLinear) {
  SpeedupOptions opt;
  opt.iterations = 1000;
  for (std::size_t n : {2u, 8u, 32u}) {
    EXPECT_DOUBLE_EQ(speedup_point(n, ExecModelSpec{}, opt).async_speedup,
                     static_cast<double>(n));
  }
}

TEST(Speedup, SyncIterationTimeNonDecreasing) {
  for (ExecMode mode : {ExecMode::homogeneous, ExecMode::heterogeneous}) {
    ExecModelSpec spec;
    spec.mode = mode;
    SpeedupOptions opt;
    opt.iterations = 4000;
    opt.populations = mode == ExecMode::heterogeneous ? 8 : 1;
    const std::vector<std::size_t> ns{1, 2, 3, 4, 8, 16};
    const auto curve = speedup_curve(ns, spec, opt);
    for (std::size_t i = 1; i < curve.size(); ++i) {
      EXPECT_GE(curve[i].sync_iteration_time, curve[i - 1].sync_iteration_time);
    }
  }
}

TEST(Speedup, RejectsBadOptions) {
  SpeedupOptions opt;
  opt.iterations = 10;
  opt.populations = 20;
  EXPECT_THROW(speedup_point(4, ExecModelSpec{}, opt), invalid_argument);
  EXPECT_THROW(speedup_point(0, ExecModelSpec{}, SpeedupOptions{}),
               invalid_argument);
}

// --- simulator --------------------------------------------------------------

std::shared_ptr<const Objective> quadratic(std::size_t samples, std::size_t k,
                                           std::uint64_t seed) {
  SeededRng rng(seed, streams::kDataset);
  auto d = std::make_shared<Dataset>();
  d->num_samples = samples;
  d->dim = k;
  d->num_classes = 1;
  d->features.resize(samples * k);
  for (double &x : d->features) x = rng.normal();
  d->labels.assign(samples, 0);
  ParamVector curvature(k);
  for (std::size_t i = 0; i < k; ++i) {
    curvature[i] = 0.01 + 0.09 * static_cast<double>(i) /
                              static_cast<double>(k - 1);
  }
  return std::make_shared<QuadraticObjective>(curvature, d);
}

SimConfig base_config(Algorithm a, std::size_t n) {
  SimConfig c;
  c.algorithm = a;
  c.workers = n;
  c.objective = quadratic(256, 6, 1);
  c.batch_size = 16;
  c.epochs = 4;
  c.seed = 3;
  c.init_scale = 0.5;
  return c;
}

TEST(Event, OrderedByTimeThenSequence) {
  EXPECT_TRUE((Event{2.0, 0, 0} > Event{1.0, 5, 9}));
  EXPECT_TRUE((Event{1.0, 0, 4} > Event{1.0, 1, 3}));
  EXPECT_FALSE((Event{1.0, 0, 3} > Event{1.0, 1, 3}));
}

TEST(Simulator, RoundRobinSteadyStateLagIsNMinusOne) {
  SimConfig c = base_config(Algorithm::asgd, 8);
  c.exec.mode = ExecMode::constant;
  std::vector<std::uint64_t> lags;
  std::vector<std::size_t> workers;
  c.observer = [&](const UpdateTrace &t) {
    lags.push_back(t.lag);
    workers.push_back(t.worker_id);
  };
  const SimResult r = run_simulation(c);
  ASSERT_EQ(lags.size(), r.updates);
  for (std::size_t i = 0; i < lags.size(); ++i) {
    EXPECT_EQ(workers[i], i % 8);
    EXPECT_EQ(lags[i], i < 8 ? i : 7u) << i;
  }
}

TEST(Simulator, UpdateCountEqualsBatchesProcessed) {
  const SimConfig c = base_config(Algorithm::dana_zero, 4);
  const SimResult r = run_simulation(c);
  EXPECT_EQ(r.updates, total_updates(c));
  EXPECT_EQ(r.updates, 4u * (256 / 16));
  std::size_t update_rows = 0, eval_rows = 0;
  for (const auto &rec : r.records) {
    (rec.is_eval ? eval_rows : update_rows)++;
  }
  EXPECT_EQ(update_rows, r.updates);
  EXPECT_EQ(eval_rows, 5u); // epoch 0 plus four boundaries
  EXPECT_EQ(r.epoch_mean_gaps.size(), 4u);
}

TEST(Simulator, TimesAreNonDecreasing) {
  SimConfig c = base_config(Algorithm::multi_asgd, 6);
  c.exec.mode = ExecMode::heterogeneous;
  const SimResult r = run_simulation(c);
  for (std::size_t i = 1; i < r.records.size(); ++i) {
    EXPECT_GE(r.records[i].sim_time, r.records[i - 1].sim_time);
  }
}

TEST(Simulator, AsyncThroughputIsLinear) {
  SimConfig c = base_config(Algorithm::asgd, 8);
  c.epochs = 40;
  const SimResult r = run_simulation(c);
  const double expected = static_cast<double>(r.updates) * 16.0 / 8.0;
  EXPECT_NEAR(r.sim_time, expected, 0.05 * expected);
}

TEST(Simulator, SameSeedIsBitIdentical) {
  for (Algorithm a : all_algorithms()) {
    const std::size_t n = a == Algorithm::sequential_nag ? 1 : 5;
    SimConfig c = base_config(a, n);
    c.exec.mode = ExecMode::heterogeneous;
    std::ostringstream x, y;
    write_metrics_csv(x, run_simulation(c).records);
    write_metrics_csv(y, run_simulation(c).records);
    EXPECT_EQ(x.str(), y.str()) << to_string(a);
    c.seed += 1;
    std::ostringstream z;
    write_metrics_csv(z, run_simulation(c).records);
    EXPECT_NE(x.str(), z.str()) << to_string(a);
  }
}

TEST(Simulator, DanaZeroSingleWorkerTracesSequentialNag) {
  SimConfig c = base_config(Algorithm::dana_zero, 1);
  c.epochs = 100.0 / 16.0; // 100 updates
  std::vector<ParamVector> dana;
  c.observer = [&](const UpdateTrace &t) { dana.push_back(*t.master_after); };
  run_simulation(c);
  c.algorithm = Algorithm::sequential_nag;
  std::vector<ParamVector> nag;
  c.observer = [&](const UpdateTrace &t) { nag.push_back(*t.master_after); };
  run_simulation(c);
  ASSERT_EQ(dana.size(), 100u);
  ASSERT_EQ(nag.size(), 100u);
  for (std::size_t i = 0; i < dana.size(); ++i) {
    EXPECT_LT(max_abs_diff(dana[i], nag[i]), 1e-12) << i;
  }
}

TEST(Simulator, SlimWarmupAndDecayStayEquivalentToZero) {
  // Momentum correction is applied to every buffer, so the shifted-variable
  // identity survives learning-rate changes.
  for (std::size_t n : {1u, 4u}) {
    SimConfig c = base_config(Algorithm::dana_zero, n);
    c.schedule.decay_epochs = {3};
    c.epochs = 4;
    std::vector<ParamVector> target;
    c.observer = [&](const UpdateTrace &t) {
      target.push_back(linear_combine(1, t.master->theta,
                                      -t.master->hyper.eta * c.gamma,
                                      t.master->aggregate_momentum));
    };
    run_simulation(c);
    c.algorithm = Algorithm::dana_slim;
    std::size_t i = 0;
    c.observer = [&](const UpdateTrace &t) {
      ASSERT_LT(relative_error(t.master->theta, target[i]), 1e-9) << i;
      ++i;
    };
    run_simulation(c);
    EXPECT_EQ(i, target.size());
  }
}

TEST(Simulator, DivergenceEndsRunWithMarker) {
  SimConfig c = base_config(Algorithm::nag_asgd, 4);
  c.schedule.base_eta = 500.0;
  c.schedule.warmup_epochs = 0;
  c.epochs = 200;
  const SimResult r = run_simulation(c);
  EXPECT_TRUE(r.diverged);
  ASSERT_FALSE(r.records.empty());
  EXPECT_TRUE(r.records.back().diverged);
  EXPECT_LT(r.updates, total_updates(c));
  EXPECT_FALSE(r.final_eval_loss.has_value());
  for (std::size_t i = 0; i + 1 < r.records.size(); ++i) {
    EXPECT_FALSE(r.records[i].diverged);
  }
}

TEST(Simulator, GapTracksLearningRateDecay) {
  SimConfig c = base_config(Algorithm::asgd, 8);
  c.objective = quadratic(1024, 10, 2);
  c.batch_size = 32;
  c.initial_params = ParamVector(10);
  c.epochs = 30;
  c.schedule.decay_factor = 0.1;
  c.schedule.decay_epochs = {15};
  const SimResult r = run_simulation(c);
  ASSERT_EQ(r.epoch_mean_gaps.size(), 30u);
  const auto &g = r.epoch_mean_gaps;
  const double before = std::accumulate(g.begin() + 10, g.begin() + 15, 0.0);
  const double after = std::accumulate(g.begin() + 25, g.begin() + 30, 0.0);
  const double ratio = after / before;
  EXPECT_GE(ratio, 0.05);
  EXPECT_LE(ratio, 0.2);
}

TEST(Simulator, ConfigValidation) {
  SimConfig c = base_config(Algorithm::sequential_nag, 2);
  EXPECT_THROW(run_simulation(c), invalid_argument);
  c = base_config(Algorithm::asgd, 0);
  EXPECT_THROW(run_simulation(c), invalid_argument);
  c = base_config(Algorithm::asgd, 2);
  c.objective = nullptr;
  EXPECT_THROW(run_simulation(c), invalid_argument);
  c = base_config(Algorithm::asgd, 2);
  c.batch_size = 1000;
  EXPECT_THROW(run_simulation(c), invalid_argument);
  c = base_config(Algorithm::asgd, 2);
  c.initial_params = ParamVector(3);
  EXPECT_THROW(run_simulation(c), dimension_error);
  c = base_config(Algorithm::asgd, 2);
  c.epochs = 0;
  EXPECT_THROW(run_simulation(c), invalid_argument);
}

TEST(MetricsCsv, FormatsOptionalFields) {
  MetricsRecord update;
  update.sim_time = 12.5;
  update.epoch = 0.25;
  update.step = 3;
  update.lag = 2;
  update.gap = 0.1;
  update.lr = 0.0125;
  update.train_loss = 1.0 / 3.0;
  MetricsRecord eval;
  eval.step = 4;
  eval.lr = 0.1;
  eval.eval_loss = 2.0;
  eval.diverged = true;
  std::ostringstream out;
  write_metrics_csv(out, std::vector{update, eval});
  EXPECT_EQ(out.str(),
            "sim_time,epoch,step,lag,gap,normalized_gap,lr,train_loss,"
            "eval_loss,diverged\n"
            "12.5,0.25,3,2,0.1,,0.0125,0.3333333333333333,,0\n"
            "0,0,4,,,,0.1,,2,1\n");
}

} // namespace
} // namespace dana
