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

#include "dana/objective.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dana/error.hpp"

namespace dana {

std::string_view to_string(ObjectiveKind kind) {
  switch (kind) {
  case ObjectiveKind::quadratic:
    return "quadratic";
  case ObjectiveKind::logistic:
    return "logistic";
  case ObjectiveKind::mlp:
    return "mlp";
  }
  return "unknown";
}

Objective::Objective(std::shared_ptr<const Dataset> data, double weight_decay)
    : data_(std::move(data)), weight_decay_(weight_decay) {
  if (!data_) {
    throw invalid_argument("objective: dataset required");
  }
  data_->validate();
  if (!(weight_decay_ >= 0.0) || !std::isfinite(weight_decay_)) {
    throw invalid_argument("objective: weight decay must be finite, >= 0");
  }
}

void Objective::check_params(const ParamVector &params) const {
  if (params.size() != dim()) {
    throw dimension_error("objective", dim(), params.size());
  }
}

void Objective::check_batch(std::span<const std::size_t> batch) const {
  if (batch.empty()) {
    throw invalid_argument("objective: empty batch");
  }
  for (std::size_t i : batch) {
    if (i >= data_->num_samples) {
      throw invalid_argument("objective: sample index " + std::to_string(i) +
                             " out of range (M = " +
                             std::to_string(data_->num_samples) + ")");
    }
  }
}

double Objective::loss(const ParamVector &params,
                       std::span<const std::size_t> batch) const {
  check_params(params);
  check_batch(batch);
  const double sum = accumulate(params, *data_, batch, nullptr);
  return sum / static_cast<double>(batch.size()) +
         0.5 * weight_decay_ * dot(params, params);
}

ParamVector Objective::grad(const ParamVector &params,
                            std::span<const std::size_t> batch) const {
  return loss_and_grad(params, batch).grad;
}

LossGrad Objective::loss_and_grad(const ParamVector &params,
                                  std::span<const std::size_t> batch) const {
  check_params(params);
  check_batch(batch);
  LossGrad out{0.0, ParamVector(dim())};
  const double sum = accumulate(params, *data_, batch, &out.grad);
  const double inv = 1.0 / static_cast<double>(batch.size());
  out.loss = sum * inv + 0.5 * weight_decay_ * dot(params, params);
  for (std::size_t i = 0; i < out.grad.size(); ++i) {
    out.grad[i] = out.grad[i] * inv + weight_decay_ * params[i];
  }
  return out;
}

double Objective::mean_loss(const ParamVector &params,
                            const Dataset &data) const {
  check_params(params);
  if (data.dim != data_->dim) {
    throw dimension_error("mean_loss", data_->dim, data.dim);
  }
  std::vector<std::size_t> all(data.num_samples);
  std::iota(all.begin(), all.end(), std::size_t{0});
  const double sum = accumulate(params, data, all, nullptr);
  return sum / static_cast<double>(data.num_samples) +
         0.5 * weight_decay_ * dot(params, params);
}

double Objective::accuracy(const ParamVector &, const Dataset &) const {
  throw invalid_argument("accuracy: objective is not a classifier");
}

ParamVector Objective::init_params(SeededRng &rng, double scale) const {
  ParamVector p(dim());
  for (double &v : p) {
    v = scale * rng.normal();
  }
  return p;
}

// --- quadratic -------------------------------------------------------------

namespace {

std::shared_ptr<const Dataset> origin_center(std::size_t k) {
  auto d = std::make_shared<Dataset>();
  d->num_samples = 1;
  d->dim = k;
  d->num_classes = 1;
  d->features.assign(k, 0.0);
  d->labels = {0};
  return d;
}

} // namespace

QuadraticObjective::QuadraticObjective(ParamVector curvature,
                                       std::shared_ptr<const Dataset> centers,
                                       double weight_decay)
    : Objective(centers ? std::move(centers) : origin_center(curvature.size()),
                weight_decay),
      curvature_(std::move(curvature)) {
  if (curvature_.empty()) {
    throw invalid_argument("quadratic: empty curvature");
  }
  if (data().dim != curvature_.size()) {
    throw dimension_error("quadratic centers", curvature_.size(), data().dim);
  }
  for (double a : curvature_) {
    if (!(a > 0.0) || !std::isfinite(a)) {
      throw invalid_argument("quadratic: curvature must be positive");
    }
  }
}

double QuadraticObjective::lipschitz() const {
  return *std::max_element(curvature_.begin(), curvature_.end()) +
         weight_decay();
}

double QuadraticObjective::accumulate(const ParamVector &params,
                                      const Dataset &data,
                                      std::span<const std::size_t> batch,
                                      ParamVector *grad_sum) const {
  const std::size_t k = dim();
  double total = 0.0;
  for (std::size_t s : batch) {
    const auto c = data.row(s);
    double l = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      const double d = params[j] - c[j];
      l += curvature_[j] * d * d;
      if (grad_sum) {
        (*grad_sum)[j] += curvature_[j] * d;
      }
    }
    total += 0.5 * l;
  }
  return total;
}

// --- softmax helpers -------------------------------------------------------

namespace {

/// Turns logits into probabilities in place; returns -log p[label].
double softmax_xent(std::span<double> z, int label) {
  const double zmax = *std::max_element(z.begin(), z.end());
  double sum = 0.0;
  for (double &v : z) {
    v = std::exp(v - zmax);
    sum += v;
  }
  for (double &v : z) {
    v /= sum;
  }
  const double zy = z[static_cast<std::size_t>(label)];
  return -std::log(std::max(zy, 1e-300));
}

std::size_t argmax(std::span<const double> z) {
  return static_cast<std::size_t>(
      std::distance(z.begin(), std::max_element(z.begin(), z.end())));
}

void check_labels(const Dataset &data, std::size_t classes) {
  if (data.num_classes > classes) {
    throw invalid_argument("dataset has more classes than the model");
  }
}

} // namespace

// --- logistic --------------------------------------------------------------

LogisticObjective::LogisticObjective(std::shared_ptr<const Dataset> data,
                                     double weight_decay)
    : Objective(std::move(data), weight_decay) {
  if (this->data().num_classes < 2) {
    throw invalid_argument("logistic: need at least two classes");
  }
}

std::size_t LogisticObjective::dim() const {
  return data().num_classes * (data().dim + 1);
}

double LogisticObjective::accumulate(const ParamVector &params,
                                     const Dataset &data,
                                     std::span<const std::size_t> batch,
                                     ParamVector *grad_sum) const {
  const std::size_t C = this->data().num_classes;
  const std::size_t d = this->data().dim;
  check_labels(data, C);
  const std::size_t bias = C * d;
  std::vector<double> z(C);
  double total = 0.0;
  for (std::size_t s : batch) {
    const auto x = data.row(s);
    for (std::size_t c = 0; c < C; ++c) {
      double acc = params[bias + c];
      for (std::size_t j = 0; j < d; ++j) {
        acc += params[c * d + j] * x[j];
      }
      z[c] = acc;
    }
    const int y = data.labels[s];
    total += softmax_xent(z, y);
    if (grad_sum) {
      z[static_cast<std::size_t>(y)] -= 1.0;
      for (std::size_t c = 0; c < C; ++c) {
        for (std::size_t j = 0; j < d; ++j) {
          (*grad_sum)[c * d + j] += z[c] * x[j];
        }
        (*grad_sum)[bias + c] += z[c];
      }
    }
  }
  return total;
}

double LogisticObjective::accuracy(const ParamVector &params,
                                   const Dataset &data) const {
  check_params(params);
  const std::size_t C = this->data().num_classes;
  const std::size_t d = this->data().dim;
  std::vector<double> z(C);
  std::size_t correct = 0;
  for (std::size_t s = 0; s < data.num_samples; ++s) {
    const auto x = data.row(s);
    for (std::size_t c = 0; c < C; ++c) {
      double acc = params[C * d + c];
      for (std::size_t j = 0; j < d; ++j) {
        acc += params[c * d + j] * x[j];
      }
      z[c] = acc;
    }
    correct += argmax(z) == static_cast<std::size_t>(data.labels[s]);
  }
  return static_cast<double>(correct) / static_cast<double>(data.num_samples);
}

// --- mlp -------------------------------------------------------------------

MlpObjective::MlpObjective(std::shared_ptr<const Dataset> data,
                           std::size_t hidden, double weight_decay)
    : Objective(std::move(data), weight_decay), hidden_(hidden) {
  if (hidden_ < 1 || hidden_ > kMaxHidden) {
    throw invalid_argument("mlp: hidden units must be in [1, 64]");
  }
  if (this->data().num_classes < 2) {
    throw invalid_argument("mlp: need at least two classes");
  }
}

std::size_t MlpObjective::dim() const {
  const std::size_t d = data().dim;
  const std::size_t C = data().num_classes;
  return hidden_ * (d + 1) + C * (hidden_ + 1);
}

ParamVector MlpObjective::init_params(SeededRng &rng, double scale) const {
  const std::size_t d = data().dim;
  const std::size_t H = hidden_;
  const std::size_t C = data().num_classes;
  ParamVector p(dim());
  const double s1 = scale / std::sqrt(static_cast<double>(d));
  const double s2 = scale / std::sqrt(static_cast<double>(H));
  std::size_t o = 0;
  for (std::size_t i = 0; i < H * d; ++i) {
    p[o++] = s1 * rng.normal();
  }
  o += H; // b1 = 0
  for (std::size_t i = 0; i < C * H; ++i) {
    p[o++] = s2 * rng.normal();
  }
  return p;
}

double MlpObjective::accumulate(const ParamVector &params, const Dataset &data,
                                std::span<const std::size_t> batch,
                                ParamVector *grad_sum) const {
  const std::size_t d = this->data().dim;
  const std::size_t H = hidden_;
  const std::size_t C = this->data().num_classes;
  check_labels(data, C);
  const std::size_t w1 = 0;
  const std::size_t b1 = H * d;
  const std::size_t w2 = b1 + H;
  const std::size_t b2 = w2 + C * H;

  std::vector<double> h(H), z(C), dh(H);
  double total = 0.0;
  for (std::size_t s : batch) {
    const auto x = data.row(s);
    for (std::size_t u = 0; u < H; ++u) {
      double acc = params[b1 + u];
      for (std::size_t j = 0; j < d; ++j) {
        acc += params[w1 + u * d + j] * x[j];
      }
      h[u] = std::tanh(acc);
    }
    for (std::size_t c = 0; c < C; ++c) {
      double acc = params[b2 + c];
      for (std::size_t u = 0; u < H; ++u) {
        acc += params[w2 + c * H + u] * h[u];
      }
      z[c] = acc;
    }
    const int y = data.labels[s];
    total += softmax_xent(z, y);
    if (!grad_sum) {
      continue;
    }
    auto &g = *grad_sum;
    z[static_cast<std::size_t>(y)] -= 1.0;
    std::fill(dh.begin(), dh.end(), 0.0);
    for (std::size_t c = 0; c < C; ++c) {
      for (std::size_t u = 0; u < H; ++u) {
        g[w2 + c * H + u] += z[c] * h[u];
        dh[u] += params[w2 + c * H + u] * z[c];
      }
      g[b2 + c] += z[c];
    }
    for (std::size_t u = 0; u < H; ++u) {
      const double da = dh[u] * (1.0 - h[u] * h[u]);
      for (std::size_t j = 0; j < d; ++j) {
        g[w1 + u * d + j] += da * x[j];
      }
      g[b1 + u] += da;
    }
  }
  return total;
}

double MlpObjective::accuracy(const ParamVector &params,
                              const Dataset &data) const {
  check_params(params);
  const std::size_t d = this->data().dim;
  const std::size_t H = hidden_;
  const std::size_t C = this->data().num_classes;
  const std::size_t b1 = H * d;
  const std::size_t w2 = b1 + H;
  const std::size_t b2 = w2 + C * H;
  std::vector<double> h(H), z(C);
  std::size_t correct = 0;
  for (std::size_t s = 0; s < data.num_samples; ++s) {
    const auto x = data.row(s);
    for (std::size_t u = 0; u < H; ++u) {
      double acc = params[b1 + u];
      for (std::size_t j = 0; j < d; ++j) {
        acc += params[u * d + j] * x[j];
      }
      h[u] = std::tanh(acc);
    }
    for (std::size_t c = 0; c < C; ++c) {
      double acc = params[b2 + c];
      for (std::size_t u = 0; u < H; ++u) {
        acc += params[w2 + c * H + u] * h[u];
      }
      z[c] = acc;
    }
    correct += argmax(z) == static_cast<std::size_t>(data.labels[s]);
  }
  return static_cast<double>(correct) / static_cast<double>(data.num_samples);
}

// --- oracle ----------------------------------------------------------------

ParamVector fd_grad(const Objective &obj, const ParamVector &params,
                    std::span<const std::size_t> batch, double h) {
  if (!(h > 0.0)) {
    throw invalid_argument("fd_grad: step must be positive");
  }
  ParamVector out(params.size());
  ParamVector probe = params;
  for (std::size_t i = 0; i < params.size(); ++i) {
    probe[i] = params[i] + h;
    const double up = obj.loss(probe, batch);
    probe[i] = params[i] - h;
    const double down = obj.loss(probe, batch);
    probe[i] = params[i];
    out[i] = (up - down) / (2.0 * h);
  }
  return out;
}

std::vector<std::size_t> full_batch(const Objective &obj) {
  std::vector<std::size_t> all(obj.num_samples());
  std::iota(all.begin(), all.end(), std::size_t{0});
  return all;
}

} // namespace dana
