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

#include <functional>

#include "dana/vec.hpp"

namespace dana {

struct Hyper {
  double eta = 0.1;   // learning rate
  double gamma = 0.9; // momentum coefficient, in [0, 1)
};

/// Single-worker optimizer state. No dampening; momentum starts at zero.
struct OptState {
  ParamVector params;
  ParamVector momentum;
  Hyper hyper;

  OptState() = default;
  OptState(ParamVector initial, Hyper h)
      : params(std::move(initial)), momentum(params.size()), hyper(h) {}
};

using GradientFn = std::function<ParamVector(const ParamVector &)>;

/// theta' = theta - eta*g.
OptState sgd_step(const OptState &state, const ParamVector &g);

/// v' = gamma*v + g; theta' = theta - eta*v'.
OptState momentum_step(const OptState &state, const ParamVector &g);

/// Result of a NAG step, keeping the look-ahead point and the gradient
/// evaluated there so callers can check theta' - lookahead == -eta*g.
struct NagStep {
  OptState state;
  ParamVector lookahead;
  ParamVector grad;
};

/// lookahead = theta - eta*gamma*v; g = grad(lookahead);
/// v' = gamma*v + g; theta' = theta - eta*v'.
NagStep nag_step(const OptState &state, const GradientFn &gradient_fn);

/// Bengio's reformulation over Theta = theta - eta*gamma*v:
/// g = grad(Theta); v' = gamma*v + g; Theta' = Theta - eta*(gamma*v' + g).
OptState bengio_nag_step(const OptState &state, const GradientFn &gradient_fn);

} // namespace dana
