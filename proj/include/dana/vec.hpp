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
#include <initializer_list>
#include <span>
#include <vector>

namespace dana {

/// Flat dense vector of 64-bit parameters, gradients or momenta.
///
/// All reductions run left to right over the elements so results are
/// bit-reproducible; element-wise operations never reorder arithmetic.
class ParamVector {
public:
  ParamVector() = default;
  explicit ParamVector(std::size_t k, double fill = 0.0) : values_(k, fill) {}
  ParamVector(std::initializer_list<double> init) : values_(init) {}
  explicit ParamVector(std::vector<double> values)
      : values_(std::move(values)) {}

  std::size_t size() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }

  double &operator[](std::size_t i) { return values_[i]; }
  double operator[](std::size_t i) const { return values_[i]; }

  std::span<double> span() noexcept { return values_; }
  std::span<const double> span() const noexcept { return values_; }
  const std::vector<double> &values() const noexcept { return values_; }

  auto begin() noexcept { return values_.begin(); }
  auto end() noexcept { return values_.end(); }
  auto begin() const noexcept { return values_.begin(); }
  auto end() const noexcept { return values_.end(); }

  bool operator==(const ParamVector &) const = default;

private:
  std::vector<double> values_;
};

/// Throws dimension_error unless `x` and `y` have the same size.
void require_same_dim(const char *where, const ParamVector &x,
                      const ParamVector &y);

/// a*x + b*y element-wise. Throws on dimension mismatch or non-finite a, b.
ParamVector linear_combine(double a, const ParamVector &x, double b,
                           const ParamVector &y);

/// y += a*x in place.
void axpy(double a, const ParamVector &x, ParamVector &y);

/// x *= a in place.
void scale(double a, ParamVector &x);

/// Element-wise product x ⊙ y.
ParamVector hadamard(const ParamVector &x, const ParamVector &y);

double dot(const ParamVector &x, const ParamVector &y);

/// Euclidean norm, summed left to right. Throws on non-finite input.
double l2_norm(const ParamVector &x);

/// Largest |x_i - y_i|.
double max_abs_diff(const ParamVector &x, const ParamVector &y);

/// ‖x - y‖ / max(‖y‖, floor); used for relative-error comparisons.
double relative_error(const ParamVector &x, const ParamVector &y,
                      double floor = 1e-300);

bool all_finite(const ParamVector &x) noexcept;

} // namespace dana
