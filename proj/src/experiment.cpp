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

#include "dana/experiment.hpp"

#include <atomic>
#include <charconv>
#include <chrono>
#include <ctime>
#include <fstream>
#include <map>
#include <mutex>
#include <ostream>
#include <thread>
#include <utility>

#include "json.hpp"

#include "dana/error.hpp"
#include "dana/rng.hpp"
#include "dana/speedup.hpp"

namespace dana {

namespace {

using json = nlohmann::json;

std::shared_ptr<const Dataset> quadratic_centers(const ObjectiveSpec &spec,
                                                 std::uint64_t seed) {
  if (spec.samples == 0) {
    return nullptr;
  }
  SeededRng rng(seed, streams::kDataset);
  auto d = std::make_shared<Dataset>();
  d->num_samples = spec.samples;
  d->dim = spec.dim;
  d->num_classes = 1;
  d->features.resize(spec.samples * spec.dim);
  for (double &x : d->features) {
    x = spec.noise * rng.normal();
  }
  d->labels.assign(spec.samples, 0);
  return d;
}

std::shared_ptr<const Dataset> classifier_data(const ObjectiveSpec &spec,
                                               std::uint64_t seed,
                                               bool eval) {
  const auto &csv = eval ? spec.eval_csv : spec.csv;
  if (csv) {
    return std::make_shared<Dataset>(load_csv_dataset(*csv));
  }
  SeededRng rng(seed, eval ? streams::kEval : streams::kDataset);
  SyntheticSpec s;
  s.num_samples = eval ? spec.eval_samples : spec.samples;
  s.dim = spec.dim;
  s.num_classes = spec.classes;
  s.separation = spec.separation;
  return std::make_shared<Dataset>(gen_synthetic(rng, s));
}

json optional_number(const std::optional<double> &x) {
  return x ? json(*x) : json(nullptr);
}

std::string utc_timestamp() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

RunOutcome execute_run(const ExperimentConfig &config, const RunSpec &run,
                       const std::filesystem::path &out_dir) {
  RunOutcome out;
  out.run = run;
  out.csv = out_dir / csv_file_name(run);
  try {
    const SimResult r = run_simulation(make_sim_config(config, run));
    std::ofstream file(out.csv, std::ios::binary);
    if (!file) {
      throw error("cannot open '" + out.csv.string() + "' for writing");
    }
    write_metrics_csv(file, r.records);
    file.flush();
    if (!file) {
      throw error("write to '" + out.csv.string() + "' failed");
    }
    out.diverged = r.diverged;
    out.updates = r.updates;
    out.sim_time = r.sim_time;
    out.final_train_loss = r.final_train_loss;
    out.final_eval_loss = r.final_eval_loss;
    out.mean_gap = r.mean_gap;
    out.mean_normalized_gap = r.mean_normalized_gap;
    out.mean_lag = r.mean_lag;
  } catch (const std::exception &e) {
    out.error = e.what();
  }
  return out;
}

json speedup_summary(const ExperimentConfig &config, std::uint64_t seed) {
  json rows = json::array();
  SpeedupOptions opt;
  opt.iterations = config.speedup.iterations;
  opt.populations = config.speedup.populations_for(config.exec.mode);
  opt.seed = seed;
  for (const SpeedupPoint &p :
       speedup_curve(config.workers, config.exec, opt)) {
    rows.push_back({{"workers", p.workers},
                    {"async", p.async_speedup},
                    {"sync", p.sync_speedup},
                    {"ratio", p.ratio}});
  }
  return rows;
}

} // namespace

std::vector<RunSpec> expand_runs(const ExperimentConfig &config,
                                 std::uint64_t seed_offset) {
  std::vector<RunSpec> runs;
  for (Algorithm a : config.algorithms) {
    for (std::size_t n : config.workers) {
      for (std::uint64_t s : config.seeds) {
        runs.push_back(RunSpec{a, n, s + seed_offset});
      }
    }
  }
  return runs;
}

BuiltObjective build_objective(const ObjectiveSpec &spec, std::uint64_t seed) {
  BuiltObjective b;
  switch (spec.kind) {
  case ObjectiveKind::quadratic: {
    ParamVector curvature(spec.dim);
    for (std::size_t i = 0; i < spec.dim; ++i) {
      const double t = spec.dim == 1 ? 1.0
                                     : static_cast<double>(i) /
                                           static_cast<double>(spec.dim - 1);
      curvature[i] =
          spec.curvature_min + t * (spec.curvature_max - spec.curvature_min);
    }
    b.objective = std::make_shared<QuadraticObjective>(
        std::move(curvature), quadratic_centers(spec, seed),
        spec.weight_decay);
    break;
  }
  case ObjectiveKind::logistic:
    b.objective = std::make_shared<LogisticObjective>(
        classifier_data(spec, seed, false), spec.weight_decay);
    b.eval_data = classifier_data(spec, seed, true);
    break;
  case ObjectiveKind::mlp:
    b.objective = std::make_shared<MlpObjective>(
        classifier_data(spec, seed, false), spec.hidden, spec.weight_decay);
    b.eval_data = classifier_data(spec, seed, true);
    break;
  }
  if (spec.init_value) {
    b.initial_params = ParamVector(b.objective->dim(), *spec.init_value);
  }
  return b;
}

SimConfig make_sim_config(const ExperimentConfig &config, const RunSpec &run) {
  BuiltObjective b = build_objective(config.objective, run.seed);
  SimConfig s;
  s.algorithm = run.algorithm;
  s.workers = run.workers;
  s.objective = std::move(b.objective);
  s.eval_data = std::move(b.eval_data);
  s.initial_params = std::move(b.initial_params);
  s.exec = config.exec;
  s.schedule = config.schedule;
  s.schedule.base_eta = config.eta;
  s.gamma = config.gamma;
  s.lambda = config.lambda;
  s.batch_size = config.batch_size;
  s.epochs = config.epochs;
  s.seed = run.seed;
  s.init_scale = config.objective.init_scale;
  return s;
}

std::string csv_file_name(const RunSpec &run) {
  return std::string(to_string(run.algorithm)) + "_N" +
         std::to_string(run.workers) + "_seed" + std::to_string(run.seed) +
         ".csv";
}

ExperimentReport run_experiment(const ExperimentConfig &config,
                                const ExperimentOptions &options,
                                std::ostream &log) {
  ExperimentReport report;
  std::error_code ec;
  std::filesystem::create_directories(options.out_dir, ec);
  if (ec) {
    log << "error: cannot create output directory '"
        << options.out_dir.string() << "': " << ec.message() << "\n";
    report.exit_code = kExitRuntime;
    return report;
  }

  const std::vector<RunSpec> runs = expand_runs(config, options.seed_offset);
  report.runs.resize(runs.size());
  std::atomic<std::size_t> next{0};
  std::mutex log_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < runs.size(); i = next++) {
      report.runs[i] = execute_run(config, runs[i], options.out_dir);
      const RunOutcome &o = report.runs[i];
      std::lock_guard lock(log_mutex);
      log << csv_file_name(o.run) << ": "
          << (o.error ? "error: " + *o.error
                      : o.diverged ? std::string("diverged")
                                   : std::string("ok"))
          << "\n";
    }
  };
  {
    const std::size_t jobs =
        std::max<std::size_t>(1, std::min(options.jobs, runs.size()));
    std::vector<std::jthread> pool;
    for (std::size_t j = 1; j < jobs; ++j) {
      pool.emplace_back(worker);
    }
    worker();
  }

  json runs_json = json::array();
  std::map<std::pair<Algorithm, std::size_t>, bool> cell_all_diverged;
  bool any_error = false;
  for (const RunOutcome &o : report.runs) {
    any_error = any_error || o.error.has_value();
    auto key = std::make_pair(o.run.algorithm, o.run.workers);
    auto [it, inserted] = cell_all_diverged.try_emplace(key, true);
    it->second = it->second && o.diverged;
    json r = {{"algorithm", to_string(o.run.algorithm)},
              {"workers", o.run.workers},
              {"seed", o.run.seed},
              {"csv", o.csv.filename().string()},
              {"diverged", o.diverged},
              {"updates", o.updates},
              {"sim_time", o.sim_time},
              {"final_train_loss", optional_number(o.final_train_loss)},
              {"final_eval_loss", optional_number(o.final_eval_loss)},
              {"mean_gap", o.mean_gap},
              {"mean_normalized_gap", optional_number(o.mean_normalized_gap)},
              {"mean_lag", o.mean_lag}};
    if (o.error) {
      r["error"] = *o.error;
    }
    runs_json.push_back(std::move(r));
  }
  bool all_diverged_cell = false;
  for (const auto &[cell, all] : cell_all_diverged) {
    if (all) {
      all_diverged_cell = true;
      log << to_string(cell.first) << " N=" << cell.second
          << " diverged under every seed\n";
    }
  }

  json summary = {
      {"generated_at", utc_timestamp()},
      {"config", json::parse(emit_config(config))},
      {"seed_offset", options.seed_offset},
      {"runs", std::move(runs_json)},
      {"speedup",
       speedup_summary(config, config.seeds.front() + options.seed_offset)}};
  report.summary = options.out_dir / "summary.json";
  std::ofstream file(report.summary, std::ios::binary);
  file << summary.dump(2) << "\n";
  file.flush();
  if (!file) {
    log << "error: cannot write '" << report.summary.string() << "'\n";
    any_error = true;
  }
  report.exit_code = any_error || all_diverged_cell ? kExitRuntime : kExitOk;
  return report;
}

void emit_speedup_table(const ExperimentConfig &config, std::ostream &out) {
  out << "workers,paradigm,mode,speedup\n";
  for (ExecMode mode : config.speedup.modes) {
    ExecModelSpec spec = config.exec;
    if (spec.mode != mode) {
      spec.mode = mode;
      spec.v_mach.reset();
    }
    SpeedupOptions opt;
    opt.iterations = config.speedup.iterations;
    opt.populations = config.speedup.populations_for(mode);
    opt.seed = config.seeds.front();
    for (const SpeedupPoint &p :
         speedup_curve(config.speedup.workers, spec, opt)) {
      const std::string prefix = std::to_string(p.workers) + ",";
      const std::string m = "," + std::string(to_string(mode)) + ",";
      out << prefix << "async" << m << format_double(p.async_speedup) << "\n";
      out << prefix << "sync" << m << format_double(p.sync_speedup) << "\n";
      out << prefix << "ratio" << m << format_double(p.ratio) << "\n";
    }
  }
}

} // namespace dana
