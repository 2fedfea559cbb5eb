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

#include "dana/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include "json.hpp"

#include "dana/error.hpp"

namespace dana {

namespace {

using json = nlohmann::json;

std::string join(const std::string &path, std::string_view key) {
  return path.empty() ? std::string(key) : path + "." + std::string(key);
}

void require_object(const json &j, const std::string &path) {
  if (!j.is_object()) {
    throw config_error(path.empty() ? "<root>" : path, "expected an object");
  }
}

void check_keys(const json &j, const std::string &path,
                std::initializer_list<std::string_view> allowed) {
  require_object(j, path);
  for (const auto &item : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), item.key()) ==
        allowed.end()) {
      throw config_error(join(path, item.key()), "unknown key");
    }
  }
}

double as_double(const json &j, const std::string &path) {
  if (!j.is_number()) {
    throw config_error(path, "expected a number");
  }
  const double x = j.get<double>();
  if (!std::isfinite(x)) {
    throw config_error(path, "expected a finite number");
  }
  return x;
}

std::uint64_t as_uint(const json &j, const std::string &path) {
  if (j.is_number_unsigned()) {
    return j.get<std::uint64_t>();
  }
  if (j.is_number_integer()) {
    const auto v = j.get<std::int64_t>();
    if (v < 0) {
      throw config_error(path, "expected a non-negative integer, got " +
                                   std::to_string(v));
    }
    return static_cast<std::uint64_t>(v);
  }
  throw config_error(path, "expected an integer");
}

bool as_bool(const json &j, const std::string &path) {
  if (!j.is_boolean()) {
    throw config_error(path, "expected true or false");
  }
  return j.get<bool>();
}

std::string as_string(const json &j, const std::string &path) {
  if (!j.is_string()) {
    throw config_error(path, "expected a string");
  }
  return j.get<std::string>();
}

/// Accepts a scalar or a non-empty array of scalars.
template <class F>
auto as_list(const json &j, const std::string &path, F &&one) {
  using T = decltype(one(j, path));
  std::vector<T> out;
  if (j.is_array()) {
    if (j.empty()) {
      throw config_error(path, "expected a non-empty list");
    }
    for (std::size_t i = 0; i < j.size(); ++i) {
      out.push_back(one(j[i], path + "[" + std::to_string(i) + "]"));
    }
  } else {
    out.push_back(one(j, path));
  }
  return out;
}

ObjectiveKind parse_objective_kind(const std::string &s,
                                   const std::string &path) {
  for (ObjectiveKind k : {ObjectiveKind::quadratic, ObjectiveKind::logistic,
                          ObjectiveKind::mlp}) {
    if (to_string(k) == s) {
      return k;
    }
  }
  throw config_error(path, "unknown objective kind '" + s + "'");
}

template <class Fn>
auto rethrow_as_config(const std::string &path, Fn &&fn) {
  try {
    return fn();
  } catch (const config_error &) {
    throw;
  } catch (const error &e) {
    throw config_error(path, e.what());
  }
}

ObjectiveSpec parse_objective(const json &j, const std::string &path) {
  ObjectiveSpec o;
  if (j.is_string()) {
    o.kind = parse_objective_kind(j.get<std::string>(), path);
    return o;
  }
  check_keys(j, path,
             {"kind", "samples", "dim", "classes", "separation", "hidden",
              "weight_decay", "csv", "eval_csv", "eval_samples",
              "curvature_min", "curvature_max", "noise", "init_scale",
              "init_value"});
  if (!j.contains("kind")) {
    throw config_error(join(path, "kind"), "missing required key");
  }
  o.kind = parse_objective_kind(as_string(j["kind"], join(path, "kind")),
                                join(path, "kind"));
  auto p = [&](const char *k) { return join(path, k); };
  if (j.contains("samples")) o.samples = as_uint(j["samples"], p("samples"));
  if (j.contains("dim")) o.dim = as_uint(j["dim"], p("dim"));
  if (j.contains("classes")) o.classes = as_uint(j["classes"], p("classes"));
  if (j.contains("separation"))
    o.separation = as_double(j["separation"], p("separation"));
  if (j.contains("hidden")) o.hidden = as_uint(j["hidden"], p("hidden"));
  if (j.contains("weight_decay"))
    o.weight_decay = as_double(j["weight_decay"], p("weight_decay"));
  if (j.contains("csv")) o.csv = as_string(j["csv"], p("csv"));
  if (j.contains("eval_csv"))
    o.eval_csv = as_string(j["eval_csv"], p("eval_csv"));
  if (j.contains("eval_samples"))
    o.eval_samples = as_uint(j["eval_samples"], p("eval_samples"));
  if (j.contains("curvature_min"))
    o.curvature_min = as_double(j["curvature_min"], p("curvature_min"));
  if (j.contains("curvature_max"))
    o.curvature_max = as_double(j["curvature_max"], p("curvature_max"));
  if (j.contains("noise")) o.noise = as_double(j["noise"], p("noise"));
  if (j.contains("init_scale"))
    o.init_scale = as_double(j["init_scale"], p("init_scale"));
  if (j.contains("init_value"))
    o.init_value = as_double(j["init_value"], p("init_value"));
  return o;
}

ExecModelSpec parse_exec(const json &j, const std::string &path) {
  check_keys(j, path, {"mode", "v_task", "v_mach", "mean",
                       "draw_task_template"});
  ExecModelSpec e;
  auto p = [&](const char *k) { return join(path, k); };
  if (j.contains("mode")) {
    const std::string s = as_string(j["mode"], p("mode"));
    e.mode = rethrow_as_config(p("mode"), [&] { return parse_exec_mode(s); });
  }
  if (j.contains("v_task")) e.v_task = as_double(j["v_task"], p("v_task"));
  if (j.contains("v_mach")) e.v_mach = as_double(j["v_mach"], p("v_mach"));
  if (j.contains("mean")) {
    const std::string s = as_string(j["mean"], p("mean"));
    e.mean =
        rethrow_as_config(p("mean"), [&] { return parse_mean_formula(s); });
  }
  if (j.contains("draw_task_template"))
    e.draw_task_template =
        as_bool(j["draw_task_template"], p("draw_task_template"));
  return e;
}

Schedule parse_schedule(const json &j, const std::string &path) {
  check_keys(j, path, {"warmup_epochs", "decay_factor", "decay_epochs",
                       "momentum_correction"});
  Schedule s;
  auto p = [&](const char *k) { return join(path, k); };
  if (j.contains("warmup_epochs"))
    s.warmup_epochs = as_double(j["warmup_epochs"], p("warmup_epochs"));
  if (j.contains("decay_factor"))
    s.decay_factor = as_double(j["decay_factor"], p("decay_factor"));
  if (j.contains("decay_epochs")) {
    const json &d = j["decay_epochs"];
    if (!d.is_array()) {
      throw config_error(p("decay_epochs"), "expected a list");
    }
    for (std::size_t i = 0; i < d.size(); ++i) {
      s.decay_epochs.push_back(
          as_double(d[i], p("decay_epochs") + "[" + std::to_string(i) + "]"));
    }
  }
  if (j.contains("momentum_correction"))
    s.momentum_correction =
        as_bool(j["momentum_correction"], p("momentum_correction"));
  return s;
}

SpeedupSpec parse_speedup(const json &j, const std::string &path) {
  check_keys(j, path, {"workers", "iterations", "populations", "modes"});
  SpeedupSpec s;
  auto p = [&](const char *k) { return join(path, k); };
  if (j.contains("workers")) {
    s.workers.clear();
    for (auto n : as_list(j["workers"], p("workers"), as_uint)) {
      s.workers.push_back(static_cast<std::size_t>(n));
    }
  }
  if (j.contains("iterations"))
    s.iterations = as_uint(j["iterations"], p("iterations"));
  if (j.contains("populations"))
    s.populations = as_uint(j["populations"], p("populations"));
  if (j.contains("modes")) {
    s.modes = as_list(j["modes"], p("modes"),
                      [](const json &v, const std::string &path2) {
                        const std::string m = as_string(v, path2);
                        return rethrow_as_config(
                            path2, [&] { return parse_exec_mode(m); });
                      });
  }
  return s;
}

json emit_objective(const ObjectiveSpec &o) {
  json j = {{"kind", to_string(o.kind)},
            {"samples", o.samples},
            {"dim", o.dim},
            {"classes", o.classes},
            {"separation", o.separation},
            {"hidden", o.hidden},
            {"weight_decay", o.weight_decay},
            {"eval_samples", o.eval_samples},
            {"curvature_min", o.curvature_min},
            {"curvature_max", o.curvature_max},
            {"noise", o.noise},
            {"init_scale", o.init_scale}};
  if (o.csv) j["csv"] = *o.csv;
  if (o.eval_csv) j["eval_csv"] = *o.eval_csv;
  if (o.init_value) j["init_value"] = *o.init_value;
  return j;
}

} // namespace

std::size_t SpeedupSpec::populations_for(ExecMode mode) const {
  if (populations) {
    return *populations;
  }
  return mode == ExecMode::heterogeneous ? 32 : 1;
}

ExperimentConfig parse_config(std::string_view text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error &e) {
    throw config_error("<root>", std::string("malformed JSON: ") + e.what());
  }
  check_keys(root, "",
             {"algorithm", "workers", "objective", "exec_model", "schedule",
              "batch_size", "epochs", "seeds", "eta", "gamma", "lambda",
              "speedup"});

  ExperimentConfig c;
  if (!root.contains("algorithm")) {
    throw config_error("algorithm", "missing required key");
  }
  c.algorithms = as_list(root["algorithm"], "algorithm",
                         [](const json &v, const std::string &path) {
                           const std::string name = as_string(v, path);
                           try {
                             return parse_algorithm(name);
                           } catch (const config_error &) {
                             throw config_error(path,
                                                "unsupported algorithm '" +
                                                    name + "'");
                           }
                         });
  if (root.contains("workers")) {
    c.workers.clear();
    for (auto n : as_list(root["workers"], "workers", as_uint)) {
      c.workers.push_back(static_cast<std::size_t>(n));
    }
  } else {
    c.workers = {1};
  }
  if (!root.contains("objective")) {
    throw config_error("objective", "missing required key");
  }
  c.objective = parse_objective(root["objective"], "objective");
  if (root.contains("exec_model"))
    c.exec = parse_exec(root["exec_model"], "exec_model");
  if (root.contains("schedule"))
    c.schedule = parse_schedule(root["schedule"], "schedule");
  if (root.contains("batch_size"))
    c.batch_size = as_uint(root["batch_size"], "batch_size");
  if (root.contains("epochs")) c.epochs = as_double(root["epochs"], "epochs");
  if (root.contains("seeds")) c.seeds = as_list(root["seeds"], "seeds", as_uint);
  if (root.contains("eta")) c.eta = as_double(root["eta"], "eta");
  if (root.contains("gamma")) c.gamma = as_double(root["gamma"], "gamma");
  if (root.contains("lambda")) c.lambda = as_double(root["lambda"], "lambda");
  if (root.contains("speedup"))
    c.speedup = parse_speedup(root["speedup"], "speedup");

  c.schedule.base_eta = c.eta;
  c.exec.batch_size = static_cast<double>(c.batch_size);
  validate(c);
  return c;
}

ExperimentConfig load_config(const std::string &path) {
  std::ifstream in(path);
  if (!in) {
    throw config_error("<file>", "cannot open config '" + path + "'");
  }
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

void validate(const ExperimentConfig &c) {
  if (c.algorithms.empty()) {
    throw config_error("algorithm", "at least one algorithm is required");
  }
  if (c.workers.empty()) {
    throw config_error("workers", "at least one worker count is required");
  }
  for (std::size_t n : c.workers) {
    if (n < 1) {
      throw config_error("workers", "need at least 1 worker, got " +
                                        std::to_string(n));
    }
  }
  const bool has_seq = std::find(c.algorithms.begin(), c.algorithms.end(),
                                 Algorithm::sequential_nag) !=
                       c.algorithms.end();
  if (has_seq && std::any_of(c.workers.begin(), c.workers.end(),
                             [](std::size_t n) { return n != 1; })) {
    throw config_error("workers", "sequential_nag requires workers = 1");
  }
  if (c.seeds.empty()) {
    throw config_error("seeds", "at least one seed is required");
  }
  if (c.batch_size < 1) {
    throw config_error("batch_size", "must be >= 1");
  }
  if (!(c.epochs > 0.0)) {
    throw config_error("epochs", "must be positive");
  }
  if (!(c.eta > 0.0)) {
    throw config_error("eta", "must be positive");
  }
  if (!(c.gamma >= 0.0 && c.gamma < 1.0)) {
    throw config_error("gamma", "must be in [0, 1)");
  }
  if (!(c.lambda >= 0.0)) {
    throw config_error("lambda", "must be >= 0");
  }

  const ObjectiveSpec &o = c.objective;
  if (o.dim < 1) {
    throw config_error("objective.dim", "must be >= 1");
  }
  if (!(o.weight_decay >= 0.0)) {
    throw config_error("objective.weight_decay", "must be >= 0");
  }
  if (!(o.init_scale >= 0.0)) {
    throw config_error("objective.init_scale", "must be >= 0");
  }
  if (o.kind == ObjectiveKind::quadratic) {
    if (!(o.curvature_min > 0.0) || !(o.curvature_max >= o.curvature_min)) {
      throw config_error("objective.curvature_min",
                         "need 0 < curvature_min <= curvature_max");
    }
    if (!(o.noise >= 0.0)) {
      throw config_error("objective.noise", "must be >= 0");
    }
    if (o.csv || o.eval_csv) {
      throw config_error("objective.csv",
                         "CSV data applies to classifiers only");
    }
    if (c.batch_size > std::max<std::size_t>(o.samples, 1)) {
      throw config_error("batch_size", "larger than the number of samples");
    }
  } else {
    if (o.kind == ObjectiveKind::mlp &&
        (o.hidden < 1 || o.hidden > MlpObjective::kMaxHidden)) {
      throw config_error("objective.hidden",
                         "must be in [1, " +
                             std::to_string(MlpObjective::kMaxHidden) + "]");
    }
    if (!o.csv) {
      if (o.classes < 2) {
        throw config_error("objective.classes", "must be >= 2");
      }
      if (o.dim < o.classes) {
        throw config_error("objective.dim", "must be >= classes");
      }
      if (o.samples < o.classes) {
        throw config_error("objective.samples", "must be >= classes");
      }
      if (c.batch_size > o.samples) {
        throw config_error("batch_size", "larger than the number of samples");
      }
    }
    if (!o.eval_csv && o.eval_samples < 1) {
      throw config_error("objective.eval_samples", "must be >= 1");
    }
  }

  rethrow_as_config("exec_model", [&] { c.exec.validate(); });
  Schedule s = c.schedule;
  s.base_eta = c.eta;
  rethrow_as_config("schedule", [&] { s.validate(); });

  for (std::size_t n : c.speedup.workers) {
    if (n < 1) {
      throw config_error("speedup.workers", "need at least 1 worker");
    }
  }
  for (ExecMode m : c.speedup.modes) {
    if (c.speedup.iterations < c.speedup.populations_for(m)) {
      throw config_error("speedup.iterations",
                         "must be >= the number of populations");
    }
  }
  if (c.speedup.populations && *c.speedup.populations < 1) {
    throw config_error("speedup.populations", "must be >= 1");
  }
}

std::string emit_config(const ExperimentConfig &c) {
  json algorithms = json::array();
  for (Algorithm a : c.algorithms) {
    algorithms.push_back(to_string(a));
  }
  json exec = {{"mode", to_string(c.exec.mode)},
               {"v_task", c.exec.v_task},
               {"mean", to_string(c.exec.mean)},
               {"draw_task_template", c.exec.draw_task_template}};
  if (c.exec.v_mach) exec["v_mach"] = *c.exec.v_mach;
  json schedule = {{"warmup_epochs", c.schedule.warmup_epochs},
                   {"decay_factor", c.schedule.decay_factor},
                   {"decay_epochs", c.schedule.decay_epochs},
                   {"momentum_correction", c.schedule.momentum_correction}};
  json modes = json::array();
  for (ExecMode m : c.speedup.modes) {
    modes.push_back(to_string(m));
  }
  json speedup = {{"workers", c.speedup.workers},
                  {"iterations", c.speedup.iterations},
                  {"modes", modes}};
  if (c.speedup.populations) speedup["populations"] = *c.speedup.populations;

  json root = {{"algorithm", algorithms},
               {"workers", c.workers},
               {"objective", emit_objective(c.objective)},
               {"exec_model", exec},
               {"schedule", schedule},
               {"batch_size", c.batch_size},
               {"epochs", c.epochs},
               {"seeds", c.seeds},
               {"eta", c.eta},
               {"gamma", c.gamma},
               {"lambda", c.lambda},
               {"speedup", speedup}};
  return root.dump(2) + "\n";
}

} // namespace dana
