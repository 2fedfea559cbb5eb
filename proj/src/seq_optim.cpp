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

#include "dana/seq_optim.hpp"

#include "dana/error.hpp"

namespace dana {

namespace {

void check_state(const char *where, const OptState &s) {
  require_same_dim(where, s.params, s.momentum);
}

} // namespace

OptState sgd_step(const OptState &state, const ParamVector &g) {
  check_state("sgd_step", state);
  OptState out = state;
  out.params = linear_combine(1.0, state.params, -state.hyper.eta, g);
  return out;
}

OptState momentum_step(const OptState &state, const ParamVector &g) {
  check_state("momentum_step", state);
  OptState out = state;
  out.momentum = linear_combine(state.hyper.gamma, state.momentum, 1.0, g);
  out.params = linear_combine(1.0, state.params, -state.hyper.eta,
                              out.momentum);
  return out;
}

NagStep nag_step(const OptState &state, const GradientFn &gradient_fn) {
  check_state("nag_step", state);
  const double eta = state.hyper.eta;
  const double gamma = state.hyper.gamma;
  NagStep out;
  out.lookahead =
      linear_combine(1.0, state.params, -eta * gamma, state.momentum);
  out.grad = gradient_fn(out.lookahead);
  require_same_dim("nag_step gradient", state.params, out.grad);
  out.state = state;
  out.state.momentum = linear_combine(gamma, state.momentum, 1.0, out.grad);
  out.state.params =
      linear_combine(1.0, state.params, -eta, out.state.momentum);
  return out;
}

OptState bengio_nag_step(const OptState &state,
                         const GradientFn &gradient_fn) {
  check_state("bengio_nag_step", state);
  const double eta = state.hyper.eta;
  const double gamma = state.hyper.gamma;
  const ParamVector g = gradient_fn(state.params);
  require_same_dim("bengio_nag_step gradient", state.params, g);
  OptState out = state;
  out.momentum = linear_combine(gamma, state.momentum, 1.0, g);
  const ParamVector update = linear_combine(gamma, out.momentum, 1.0, g);
  out.params = linear_combine(1.0, state.params, -eta, update);
  return out;
}

} // namespace dana
