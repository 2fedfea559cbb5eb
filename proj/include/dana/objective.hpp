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

#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "dana/dataset.hpp"
#include "dana/rng.hpp"
#include "dana/vec.hpp"

namespace dana {

enum class ObjectiveKind { quadratic, logistic, mlp };

std::string_view to_string(ObjectiveKind kind);

struct LossGrad {
  double loss = 0.0;
  ParamVector grad;
};

/// A differentiable training objective over a fixed dataset.
///
/// Losses and gradients are batch means of the per-sample terms plus a
/// coupled weight-decay term (lambda/2)||theta||^2, whose gradient
/// lambda*theta is added inside `grad`. All methods are const and the
/// object is immutable, so one instance may be shared across threads.
class Objective {
public:
  virtual ~Objective() = default;

  virtual ObjectiveKind kind() const = 0;
  /// Parameter dimension k.
  virtual std::size_t dim() const = 0;
  virtual bool is_classifier() const { return false; }

  double weight_decay() const noexcept { return weight_decay_; }
  const Dataset &data() const noexcept { return *data_; }
  std::size_t num_samples() const noexcept { return data_->num_samples; }

  /// Throws invalid_argument on an empty batch or an index >= M.
  double loss(const ParamVector &params,
              std::span<const std::size_t> batch) const;
  ParamVector grad(const ParamVector &params,
                   std::span<const std::size_t> batch) const;
  LossGrad loss_and_grad(const ParamVector &params,
                         std::span<const std::size_t> batch) const;

  /// Mean loss over every sample of `data` (which must match this
  /// objective's feature dimension), plus weight decay.
  double mean_loss(const ParamVector &params, const Dataset &data) const;

  /// Fraction of `data` classified correctly. Classifiers only.
  virtual double accuracy(const ParamVector &params,
                          const Dataset &data) const;

  /// Random starting point; entries ~ N(0, scale^2) unless the model needs
  /// fan-in scaling.
  virtual ParamVector init_params(SeededRng &rng, double scale) const;

protected:
  Objective(std::shared_ptr<const Dataset> data, double weight_decay);

  /// Sum of per-sample losses over `batch`; when `grad_sum` is non-null,
  /// adds the summed per-sample gradients to it.
  virtual double accumulate(const ParamVector &params, const Dataset &data,
                            std::span<const std::size_t> batch,
                            ParamVector *grad_sum) const = 0;

  void check_params(const ParamVector &params) const;

private:
  void check_batch(std::span<const std::size_t> batch) const;

  std::shared_ptr<const Dataset> data_;
  double weight_decay_;
};

/// Per-sample loss (1/2) sum_d a_d (theta_d - c_d)^2 where c is the sample's
/// feature row. Without a dataset there is one sample centred at the
/// origin, giving the bowl (1/2) theta^T A theta with A = diag(curvature).
class QuadraticObjective final : public Objective {
public:
  QuadraticObjective(ParamVector curvature,
                     std::shared_ptr<const Dataset> centers = nullptr,
                     double weight_decay = 0.0);

  ObjectiveKind kind() const override { return ObjectiveKind::quadratic; }
  std::size_t dim() const override { return curvature_.size(); }
  const ParamVector &curvature() const noexcept { return curvature_; }

  /// Gradient Lipschitz constant: max curvature + weight decay.
  double lipschitz() const;

protected:
  double accumulate(const ParamVector &params, const Dataset &data,
                    std::span<const std::size_t> batch,
                    ParamVector *grad_sum) const override;

private:
  ParamVector curvature_;
};

/// Multinomial logistic regression (softmax with bias).
/// Layout: weights C x d row-major, then C biases; k = C * (d + 1).
class LogisticObjective final : public Objective {
public:
  LogisticObjective(std::shared_ptr<const Dataset> data,
                    double weight_decay = 0.0);

  ObjectiveKind kind() const override { return ObjectiveKind::logistic; }
  std::size_t dim() const override;
  bool is_classifier() const override { return true; }
  double accuracy(const ParamVector &params,
                  const Dataset &data) const override;

protected:
  double accumulate(const ParamVector &params, const Dataset &data,
                    std::span<const std::size_t> batch,
                    ParamVector *grad_sum) const override;
};

/// One hidden tanh layer followed by a softmax output.
/// Layout: W1 (H x d), b1 (H), W2 (C x H), b2 (C).
class MlpObjective final : public Objective {
public:
  static constexpr std::size_t kMaxHidden = 64;

  MlpObjective(std::shared_ptr<const Dataset> data, std::size_t hidden,
               double weight_decay = 0.0);

  ObjectiveKind kind() const override { return ObjectiveKind::mlp; }
  std::size_t dim() const override;
  bool is_classifier() const override { return true; }
  std::size_t hidden() const noexcept { return hidden_; }
  double accuracy(const ParamVector &params,
                  const Dataset &data) const override;
  ParamVector init_params(SeededRng &rng, double scale) const override;

protected:
  double accumulate(const ParamVector &params, const Dataset &data,
                    std::span<const std::size_t> batch,
                    ParamVector *grad_sum) const override;

private:
  std::size_t hidden_;
};

/// Central differences (J(theta + h e_i) - J(theta - h e_i)) / 2h for every
/// coordinate. Throws unless h > 0.
ParamVector fd_grad(const Objective &obj, const ParamVector &params,
                    std::span<const std::size_t> batch, double h);

/// Indices 0..M-1 of the objective's dataset.
std::vector<std::size_t> full_batch(const Objective &obj);

} // namespace dana
