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
#include <vector>

#include <gtest/gtest.h>

#include "dana/error.hpp"
#include "dana/objective.hpp"
#include "dana/rng.hpp"
#include "dana/staleness.hpp"

namespace dana {
namespace {

TEST(Gap, Examples) {
  EXPECT_NEAR(gap({3, 4}, {0, 0}), 3.5355339059327378, 1e-15);
  EXPECT_EQ(gap({1, 2, 3}, {1, 2, 3}), 0.0);
  EXPECT_DOUBLE_EQ(gap({2.5, 2.5, 2.5, 2.5}, {0, 0, 0, 0}), 2.5);
  EXPECT_DOUBLE_EQ(gap({-1, -1, -1}, {0, 0, 0}), 1.0);
}

TEST(Gap, Errors) {
  EXPECT_THROW(gap({1, 2}, {1}), dimension_error);
  EXPECT_THROW(gap(ParamVector{}, ParamVector{}), invalid_argument);
}

TEST(Gap, SymmetricAndTranslationInvariant) {
  SeededRng rng(1, 0);
  for (int t = 0; t < 200; ++t) {
    ParamVector x(6), y(6), c(6);
    for (std::size_t i = 0; i < 6; ++i) {
      x[i] = rng.normal();
      y[i] = rng.normal();
      c[i] = 0.25 * std::floor(8 * rng.normal());
    }
    EXPECT_EQ(gap(x, y), gap(y, x));
    EXPECT_NEAR(gap(linear_combine(1, x, 1, c), linear_combine(1, y, 1, c)),
                gap(x, y), 1e-14);
  }
}

TEST(NormalizedGap, Examples) {
  EXPECT_EQ(normalized_gap(2, 4), 0.5);
  EXPECT_EQ(normalized_gap(0, 4), 0.0);
  EXPECT_FALSE(normalized_gap(1, 0).has_value());
  EXPECT_DOUBLE_EQ(*normalized_gap(2 * 7.5, 4 * 7.5), 0.5);
}

TEST(Lag, Examples) {
  EXPECT_EQ(lag(10, 17), 7u);
  EXPECT_EQ(lag(5, 5), 0u);
  EXPECT_THROW(lag(6, 5), invalid_argument);
}

std::vector<GradientPair> quadratic_pairs(const QuadraticObjective &q,
                                          std::size_t n, std::uint64_t seed) {
  SeededRng rng(seed, 0);
  const std::vector<std::size_t> b{0};
  std::vector<GradientPair> pairs;
  for (std::size_t i = 0; i < n; ++i) {
    ParamVector a(q.dim()), c(q.dim());
    for (std::size_t d = 0; d < q.dim(); ++d) {
      a[d] = 3 * rng.normal();
      c[d] = 3 * rng.normal();
    }
    pairs.push_back({a, c, q.grad(a, b), q.grad(c, b)});
  }
  return pairs;
}

TEST(Lipschitz, ExactConstantHasNoViolations) {
  QuadraticObjective q(ParamVector{1, 2});
  const auto pairs = quadratic_pairs(q, 10000, 3);
  const LipschitzReport r = lipschitz_check(pairs, 2.0);
  EXPECT_EQ(r.pairs, 10000u);
  EXPECT_EQ(r.violations, 0u);
  EXPECT_EQ(r.violation_fraction, 0.0);
  EXPECT_LE(r.max_ratio, 1.0 + 1e-12);
}

TEST(Lipschitz, IdenticalPointsSatisfyWithEquality) {
  const GradientPair p{{1, 2}, {1, 2}, {3, 4}, {3, 4}};
  const LipschitzReport r = lipschitz_check(std::vector{p}, 2.0);
  EXPECT_EQ(r.violations, 0u);
}

TEST(Lipschitz, HalvedConstantIsViolated) {
  QuadraticObjective q(ParamVector{1, 2});
  const auto pairs = quadratic_pairs(q, 1000, 4);
  const LipschitzReport r = lipschitz_check(pairs, 1.0);
  EXPECT_GT(r.violations, 0u);
  EXPECT_GT(r.max_ratio, 1.0);
}

} // namespace
} // namespace dana
