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
#include <vector>

#include "dana/vec.hpp"

namespace dana {

/// Learning-rate schedule: linear warm-up from base_eta / N to base_eta over
/// warmup_epochs, then step decay by decay_factor at each decay epoch.
struct Schedule {
  double base_eta = 0.1;
  double warmup_epochs = 5.0;
  std::size_t num_workers = 1;
  double decay_factor = 0.1;
  std::vector<double> decay_epochs; // sorted ascending
  bool momentum_correction = true;

  /// Throws invalid_argument on a non-positive rate, negative warm-up,
  /// N < 1 or unsorted decay epochs.
  void validate() const;

  bool operator==(const Schedule &) const = default;
};

double lr_at(const Schedule &schedule, double epoch);

/// v * eta_old / eta_new, keeping eta * v continuous across a rate change.
ParamVector momentum_correct(const ParamVector &v, double eta_old,
                             double eta_new);

} // namespace dana
