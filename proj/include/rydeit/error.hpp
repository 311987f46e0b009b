// Copyright 2026 The rydeit Authors
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

namespace rydeit {

/// Base class for every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on numeric inputs was violated.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// The level scheme's graph or drive layout cannot be handled.
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// Integration or linear-algebra failure.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Feature extraction could not produce a result.
class AnalysisError : public Error {
 public:
  using Error::Error;
};

/// Malformed .scheme / manifest text. Line and column are 1-based; 0 means
/// the error is not tied to a position (e.g. a missing section).
class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& reason)
      : Error(format(line, column, reason)), line_(line), column_(column), reason_(reason) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  const std::string& reason() const { return reason_; }

 private:
  static std::string format(std::size_t line, std::size_t column, const std::string& reason) {
    if (line == 0) return reason;
    return "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + reason;
  }

  std::size_t line_;
  std::size_t column_;
  std::string reason_;
};

}  // namespace rydeit
