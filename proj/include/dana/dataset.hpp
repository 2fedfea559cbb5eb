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
#include <filesystem>
#include <istream>
#include <span>
#include <vector>

#include "dana/rng.hpp"

namespace dana {

/// M samples of d features with integer class labels. Immutable once built.
struct Dataset {
  std::size_t num_samples = 0;
  std::size_t dim = 0;
  std::size_t num_classes = 0;
  std::vector<double> features; // row-major, num_samples x dim
  std::vector<int> labels;

  std::span<const double> row(std::size_t i) const {
    return std::span<const double>(features).subspan(i * dim, dim);
  }

  /// Throws invalid_argument if any invariant is broken (M >= 1, label in
  /// range, finite features, consistent sizes).
  void validate() const;
};

struct SyntheticSpec {
  std::size_t num_samples = 1000;
  std::size_t dim = 10;
  std::size_t num_classes = 2;
  double separation = 4.0;
};

/// Gaussian class clusters with unit variance. Class c is centred at
/// (separation / sqrt 2) * e_c, so every pair of centres is `separation`
/// apart. Labels are balanced to within one and shuffled.
Dataset gen_synthetic(SeededRng &rng, const SyntheticSpec &spec);

/// CSV with a header row; one sample per line, last column an integer label,
/// the other columns floats. `num_classes` is max label + 1.
Dataset parse_csv_dataset(std::istream &in);
Dataset load_csv_dataset(const std::filesystem::path &path);

} // namespace dana
