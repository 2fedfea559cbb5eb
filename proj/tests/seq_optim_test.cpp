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

#include <gtest/gtest.h>

#include "dana/error.hpp"
#include "dana/objective.hpp"
#include "dana/seq_optim.hpp"

namespace dana {
namespace {

OptState make_state(ParamVector theta, ParamVector v, double eta,
                    double gamma) {
  OptState s(std::move(theta), Hyper{eta, gamma});
  s.momentum = std::move(v);
  return s;
}

ParamVector identity_grad(const ParamVector &p) { return p; }

TEST(Sgd, HandEvaluated) {
  const OptState s = sgd_step(make_state({1}, {0}, 0.1, 0.9), {0.5});
  EXPECT_DOUBLE_EQ(s.params[0], 0.95);
  EXPECT_EQ(s.momentum, ParamVector({0}));
}

TEST(Sgd, FixedPoints) {
  const OptState base = make_state({1, 2}, {0, 0}, 0.1, 0.9);
  EXPECT_EQ(sgd_step(base, {0, 0}).params, base.params);
  EXPECT_EQ(sgd_step(make_state({1, 2}, {0, 0}, 0.0, 0.9), {3, 4}).params,
            base.params);
  EXPECT_THROW(sgd_step(base, {1}), dimension_error);
}

TEST(OptState, MomentumStartsAtZero) {
  const OptState s(ParamVector{1, 2, 3}, Hyper{});
  EXPECT_EQ(s.momentum, ParamVector(3, 0.0));
  EXPECT_EQ(s.hyper.eta, 0.1);
  EXPECT_EQ(s.hyper.gamma, 0.9);
}

TEST(Momentum, HandEvaluated) {
  const OptState s = momentum_step(make_state({0}, {1}, 0.1, 0.9), {0.5});
  EXPECT_DOUBLE_EQ(s.momentum[0], 1.4);
  EXPECT_DOUBLE_EQ(s.params[0], -0.14);
}

TEST(Momentum, ZeroGammaIsSgd) {
  const OptState base = make_state({1, -2}, {0.3, 0.7}, 0.05, 0.0);
  EXPECT_EQ(momentum_step(base, {2, 3}).params, sgd_step(base, {2, 3}).params);
}

TEST(Momentum, DecaysGeometricallyWithoutGradient) {
  OptState s = make_state({0}, {1}, 0.1, 0.9);
  for (int t = 1; t <= 20; ++t) {
    s = momentum_step(s, {0});
    EXPECT_NEAR(s.momentum[0], std::pow(0.9, t), 1e-15);
  }
}

TEST(Nag, HandEvaluated) {
  const NagStep out = nag_step(make_state({1}, {1}, 0.1, 0.9), identity_grad);
  EXPECT_DOUBLE_EQ(out.lookahead[0], 0.91);
  EXPECT_DOUBLE_EQ(out.grad[0], 0.91);
  EXPECT_DOUBLE_EQ(out.state.momentum[0], 1.81);
  EXPECT_DOUBLE_EQ(out.state.params[0], 0.819);
}

TEST(Nag, ZeroMomentumMatchesMomentumStep) {
  const OptState base = make_state({1, 2}, {0, 0}, 0.1, 0.9);
  const NagStep out = nag_step(base, identity_grad);
  EXPECT_EQ(out.lookahead, base.params);
  EXPECT_EQ(out.state.params, momentum_step(base, base.params).params);
}

TEST(Nag, LookaheadIdentityEveryStep) {
  QuadraticObjective q(ParamVector{0.5, 1.0, 2.0});
  const std::vector<std::size_t> b{0};
  OptState s = make_state({1, -1, 2}, {0, 0, 0}, 0.1, 0.9);
  for (int t = 0; t < 200; ++t) {
    const NagStep out =
        nag_step(s, [&](const ParamVector &p) { return q.grad(p, b); });
    // theta' - theta_hat = -eta g
    const ParamVector lhs = linear_combine(1, out.state.params, -1,
                                           out.lookahead);
    const ParamVector rhs = linear_combine(-0.1, out.grad, 0, out.grad);
    EXPECT_LT(max_abs_diff(lhs, rhs), 1e-15);
    s = out.state;
  }
}

TEST(BengioNag, HandEvaluated) {
  const OptState s =
      bengio_nag_step(make_state({0}, {1}, 0.1, 0.9), identity_grad);
  EXPECT_DOUBLE_EQ(s.momentum[0], 0.9);
  EXPECT_DOUBLE_EQ(s.params[0], -0.081);
}

TEST(BengioNag, ZeroGammaIsSgd) {
  const OptState base = make_state({1, 2}, {0, 0}, 0.1, 0.0);
  EXPECT_EQ(bengio_nag_step(base, identity_grad).params,
            sgd_step(base, base.params).params);
}

TEST(BengioNag, ChangeOfVariablesQuadratic) {
  QuadraticObjective q(ParamVector{0.1, 0.7, 1.3, 2.0});
  const std::vector<std::size_t> b{0};
  auto g = [&](const ParamVector &p) { return q.grad(p, b); };
  OptState nag = make_state({1, -2, 0.5, 3}, ParamVector(4), 0.1, 0.9);
  OptState bengio = nag;
  for (int t = 0; t < 1000; ++t) {
    nag = nag_step(nag, g).state;
    bengio = bengio_nag_step(bengio, g);
    const ParamVector expected =
        linear_combine(1, nag.params, -0.1 * 0.9, nag.momentum);
    ASSERT_LT(max_abs_diff(bengio.params, expected), 1e-12) << "t=" << t;
  }
}

TEST(BengioNag, ChangeOfVariablesMlp) {
  SeededRng rng(13, streams::kDataset);
  auto data = std::make_shared<Dataset>(
      gen_synthetic(rng, SyntheticSpec{64, 4, 2, 4.0}));
  MlpObjective mlp(data, 6);
  const auto batch = full_batch(mlp);
  auto g = [&](const ParamVector &p) { return mlp.grad(p, batch); };
  SeededRng init(13, streams::kInit);
  OptState nag(mlp.init_params(init, 1.0), Hyper{0.05, 0.9});
  OptState bengio = nag;
  for (int t = 0; t < 1000; ++t) {
    nag = nag_step(nag, g).state;
    bengio = bengio_nag_step(bengio, g);
    const ParamVector expected =
        linear_combine(1, nag.params, -0.05 * 0.9, nag.momentum);
    ASSERT_LT(relative_error(bengio.params, expected), 1e-9) << "t=" << t;
  }
}

TEST(Momentum, ConvergesFasterThanSgdOnIllConditionedBowl) {
  QuadraticObjective q(ParamVector{0.01, 0.1, 1.0});
  const std::vector<std::size_t> b{0};
  auto steps_to_converge = [&](double gamma) {
    OptState s(ParamVector{1, 1, 1}, Hyper{1.0, gamma});
    for (int t = 1; t <= 100000; ++t) {
      s = momentum_step(s, q.grad(s.params, b));
      if (l2_norm(s.params) < 1e-6) return t;
    }
    return 100001;
  };
  const int sgd = steps_to_converge(0.0);
  const int heavy_ball = steps_to_converge(0.9);
  EXPECT_LT(heavy_ball, sgd);
  EXPECT_LE(sgd, 100000);
}

TEST(Nag, GradientDimensionMismatchThrows) {
  const OptState base = make_state({1, 2}, {0, 0}, 0.1, 0.9);
  EXPECT_THROW(nag_step(base, [](const ParamVector &) {
                 return ParamVector{1};
               }),
               dimension_error);
}

} // namespace
} // namespace dana
