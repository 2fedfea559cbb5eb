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

#include "dana/vec.hpp"

#include <algorithm>
#include <cmath>

#include "dana/error.hpp"

namespace dana {

void require_same_dim(const char *where, const ParamVector &x,
                      const ParamVector &y) {
  if (x.size() != y.size()) {
    throw dimension_error(where, x.size(), y.size());
  }
}

ParamVector linear_combine(double a, const ParamVector &x, double b,
                           const ParamVector &y) {
  require_same_dim("linear_combine", x, y);
  if (!std::isfinite(a) || !std::isfinite(b)) {
    throw invalid_argument("linear_combine: non-finite coefficient");
  }
  ParamVector out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    out[i] = a * x[i] + b * y[i];
  }
  return out;
}

void axpy(double a, const ParamVector &x, ParamVector &y) {
  require_same_dim("axpy", x, y);
  for (std::size_t i = 0; i < x.size(); ++i) {
    y[i] += a * x[i];
  }
}

void scale(double a, ParamVector &x) {
  for (double &v : x) {
    v *= a;
  }
}

ParamVector hadamard(const ParamVector &x, const ParamVector &y) {
  require_same_dim("hadamard", x, y);
  ParamVector out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    out[i] = x[i] * y[i];
  }
  return out;
}

double dot(const ParamVector &x, const ParamVector &y) {
  require_same_dim("dot", x, y);
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    acc += x[i] * y[i];
  }
  return acc;
}

double l2_norm(const ParamVector &x) {
  double acc = 0.0;
  for (double v : x) {
    if (!std::isfinite(v)) {
      throw invalid_argument("l2_norm: non-finite element");
    }
    acc += v * v;
  }
  return std::sqrt(acc);
}

double max_abs_diff(const ParamVector &x, const ParamVector &y) {
  require_same_dim("max_abs_diff", x, y);
  double m = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    m = std::max(m, std::abs(x[i] - y[i]));
  }
  return m;
}

double relative_error(const ParamVector &x, const ParamVector &y,
                      double floor) {
  require_same_dim("relative_error", x, y);
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - y[i];
    num += d * d;
    den += y[i] * y[i];
  }
  return std::sqrt(num) / std::max(std::sqrt(den), floor);
}

bool all_finite(const ParamVector &x) noexcept {
  return std::all_of(x.begin(), x.end(),
                     [](double v) { return std::isfinite(v); });
}

} // namespace dana
