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

#include "dana/schedule.hpp"

#include <algorithm>
#include <cmath>

#include "dana/error.hpp"

namespace dana {

void Schedule::validate() const {
  if (!(base_eta > 0.0) || !std::isfinite(base_eta)) {
    throw invalid_argument("schedule: base learning rate must be positive");
  }
  if (!(warmup_epochs >= 0.0)) {
    throw invalid_argument("schedule: warm-up must be >= 0 epochs");
  }
  if (num_workers < 1) {
    throw invalid_argument("schedule: need at least one worker");
  }
  if (!(decay_factor > 0.0)) {
    throw invalid_argument("schedule: decay factor must be positive");
  }
  if (!std::is_sorted(decay_epochs.begin(), decay_epochs.end())) {
    throw invalid_argument("schedule: decay epochs must be sorted");
  }
}

double lr_at(const Schedule &s, double epoch) {
  if (!(epoch >= 0.0)) {
    throw invalid_argument("lr_at: epoch must be >= 0");
  }
  if (epoch < s.warmup_epochs) {
    const double start = s.base_eta / static_cast<double>(s.num_workers);
    return start + (s.base_eta - start) * (epoch / s.warmup_epochs);
  }
  double eta = s.base_eta;
  for (double d : s.decay_epochs) {
    if (epoch >= d) {
      eta *= s.decay_factor;
    }
  }
  return eta;
}

ParamVector momentum_correct(const ParamVector &v, double eta_old,
                             double eta_new) {
  if (!(eta_old > 0.0) || !(eta_new > 0.0)) {
    throw invalid_argument("momentum_correct: rates must be positive");
  }
  ParamVector out = v;
  if (eta_old != eta_new) {
    scale(eta_old / eta_new, out);
  }
  return out;
}

} // namespace dana
