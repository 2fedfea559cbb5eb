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

#include "dana/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>

#include "dana/error.hpp"

namespace dana {

void Dataset::validate() const {
  if (num_samples < 1) {
    throw invalid_argument("dataset: needs at least one sample");
  }
  if (features.size() != num_samples * dim || labels.size() != num_samples) {
    throw invalid_argument("dataset: inconsistent sizes");
  }
  for (int y : labels) {
    if (y < 0 || static_cast<std::size_t>(y) >= num_classes) {
      throw invalid_argument("dataset: label " + std::to_string(y) +
                             " outside [0, " + std::to_string(num_classes) +
                             ")");
    }
  }
  for (double x : features) {
    if (!std::isfinite(x)) {
      throw invalid_argument("dataset: non-finite feature");
    }
  }
}

Dataset gen_synthetic(SeededRng &rng, const SyntheticSpec &spec) {
  if (spec.num_classes < 2 || spec.num_samples < spec.num_classes) {
    throw invalid_argument(
        "gen_synthetic: need num_samples >= num_classes >= 2");
  }
  if (spec.dim < spec.num_classes) {
    throw invalid_argument("gen_synthetic: dim must be >= num_classes");
  }
  if (!(spec.separation >= 0.0) || !std::isfinite(spec.separation)) {
    throw invalid_argument("gen_synthetic: separation must be finite, >= 0");
  }

  Dataset d;
  d.num_samples = spec.num_samples;
  d.dim = spec.dim;
  d.num_classes = spec.num_classes;
  d.labels.resize(spec.num_samples);
  for (std::size_t i = 0; i < spec.num_samples; ++i) {
    d.labels[i] = static_cast<int>(i % spec.num_classes);
  }
  // Fisher-Yates with our own index draw; std::shuffle is not portable.
  for (std::size_t i = spec.num_samples - 1; i > 0; --i) {
    const auto j = static_cast<std::size_t>(rng.uniform_index(i + 1));
    std::swap(d.labels[i], d.labels[j]);
  }

  const double offset = spec.separation / std::sqrt(2.0);
  d.features.resize(spec.num_samples * spec.dim);
  for (std::size_t i = 0; i < spec.num_samples; ++i) {
    const auto c = static_cast<std::size_t>(d.labels[i]);
    for (std::size_t j = 0; j < spec.dim; ++j) {
      d.features[i * spec.dim + j] = rng.normal() + (j == c ? offset : 0.0);
    }
  }
  return d;
}

namespace {

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(',', start);
    out.push_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos) {
      break;
    }
    start = pos + 1;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
    s.remove_prefix(1);
  }
  while (!s.empty() &&
         (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

} // namespace

Dataset parse_csv_dataset(std::istream &in) {
  std::string line;
  if (!std::getline(in, line)) {
    throw invalid_argument("csv: missing header row");
  }
  const std::size_t columns = split_commas(line).size();
  if (columns < 2) {
    throw invalid_argument("csv: need at least one feature and a label");
  }

  Dataset d;
  d.dim = columns - 1;
  int max_label = -1;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) {
      continue;
    }
    const auto cells = split_commas(line);
    if (cells.size() != columns) {
      throw invalid_argument("csv line " + std::to_string(lineno) +
                             ": expected " + std::to_string(columns) +
                             " columns");
    }
    for (std::size_t j = 0; j < d.dim; ++j) {
      const auto cell = trim(cells[j]);
      double v = 0.0;
      const auto [p, ec] =
          std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (ec != std::errc{} || p != cell.data() + cell.size()) {
        throw invalid_argument("csv line " + std::to_string(lineno) +
                               ": bad float '" + std::string(cell) + "'");
      }
      d.features.push_back(v);
    }
    const auto cell = trim(cells.back());
    int label = 0;
    const auto [p, ec] =
        std::from_chars(cell.data(), cell.data() + cell.size(), label);
    if (ec != std::errc{} || p != cell.data() + cell.size() || label < 0) {
      throw invalid_argument("csv line " + std::to_string(lineno) +
                             ": bad label '" + std::string(cell) + "'");
    }
    max_label = std::max(max_label, label);
    d.labels.push_back(label);
  }
  d.num_samples = d.labels.size();
  d.num_classes = static_cast<std::size_t>(max_label + 1);
  d.validate();
  return d;
}

Dataset load_csv_dataset(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) {
    throw invalid_argument("cannot open dataset " + path.string());
  }
  return parse_csv_dataset(in);
}

} // namespace dana
