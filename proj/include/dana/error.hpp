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
#include <stdexcept>
#include <string>

namespace dana {

/// Base class for every error raised by the library.
class error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Two vectors that must share dimension k do not.
class dimension_error : public error {
public:
  dimension_error(const char *where, std::size_t expected, std::size_t got)
      : error(std::string(where) + ": dimension mismatch (expected " +
              std::to_string(expected) + ", got " + std::to_string(got) +
              ")") {}
};

/// A precondition on a scalar argument or index was violated.
class invalid_argument : public error {
public:
  using error::error;
};

/// Configuration rejected during validation; `path()` names the offending
/// key (e.g. "objective.kind").
class config_error : public error {
public:
  config_error(std::string path, const std::string &what)
      : error(path.empty() ? what : path + ": " + what),
        path_(std::move(path)) {}

  const std::string &path() const noexcept { return path_; }

private:
  std::string path_;
};

} // namespace dana
