// Copyright 2026 The diffrl Authors
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

namespace diffrl {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text. `line()` is 1-based, 0 when not line-oriented.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class MissingBaselineError : public Error {
 public:
  explicit MissingBaselineError(std::string environment)
      : Error("no baseline for environment '" + environment + "'"),
        environment_(std::move(environment)) {}

  const std::string& environment() const noexcept { return environment_; }

 private:
  std::string environment_;
};

class DegenerateBaselineError : public Error {
 public:
  explicit DegenerateBaselineError(std::string environment)
      : Error("degenerate baseline for environment '" + environment +
              "': human_play equals random_play"),
        environment_(std::move(environment)) {}

  const std::string& environment() const noexcept { return environment_; }

 private:
  std::string environment_;
};

}  // namespace diffrl
