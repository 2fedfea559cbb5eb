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

#include <cstdint>
#include <optional>
#include <random>

namespace dana {

/// Well-known stream ids split from one root seed. Worker i owns
/// `worker_stream(i)` and `worker_data_stream(i)`, so adding workers never
/// perturbs the streams of existing workers.
namespace streams {
inline constexpr std::uint64_t kInit = 2;
inline constexpr std::uint64_t kMachines = 3;
inline constexpr std::uint64_t kEval = 4;
inline constexpr std::uint64_t kDataset = 5; // synthetic training set
inline constexpr std::uint64_t kWorkerBase = 1u << 20;
inline constexpr std::uint64_t kWorkerDataBase = 2u << 20;
/// Execution-time draws of worker i.
constexpr std::uint64_t worker_stream(std::uint64_t worker) {
  return kWorkerBase + worker;
}
/// Batch order of worker i.
constexpr std::uint64_t worker_data_stream(std::uint64_t worker) {
  return kWorkerDataBase + worker;
}
} // namespace streams

/// Deterministic random source keyed by (seed, stream id).
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the
/// standard. The distributions are implemented here rather than taken from
/// <random>, whose algorithms differ between standard libraries.
class SeededRng {
public:
  SeededRng(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream() const noexcept { return stream_; }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();

  /// Uniform on (0, 1); never returns 0.
  double uniform_open();

  /// Uniform integer in [0, n). Throws if n == 0.
  std::uint64_t uniform_index(std::uint64_t n);

  /// Standard normal (Marsaglia polar method).
  double normal();

  /// One draw from Gamma(shape, scale), mean shape*scale
  /// (Marsaglia-Tsang). Throws unless shape > 0 and scale > 0.
  double gamma(double shape, double scale);

  /// Exponential with the given mean.
  double exponential(double mean);

private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::mt19937_64 engine_;
  std::optional<double> spare_normal_;
};

/// SplitMix64 finalizer; used to derive engine seeds from (seed, stream).
std::uint64_t splitmix64(std::uint64_t x) noexcept;

} // namespace dana
