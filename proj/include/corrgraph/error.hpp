// Copyright 2026 The corrgraph Authors.
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

namespace corrgraph {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Pair or variable index outside its valid range.
class IndexError : public Error {
 public:
  using Error::Error;
};

/// Input data that makes a statistic undefined: a constant column, a zero
/// product variance, or too few observations.
class DegenerateInputError : public Error {
 public:
  DegenerateInputError(const std::string& what, std::ptrdiff_t column = -1)
      : Error(what), column_(column) {}

  /// Zero-based offending column, or -1 when the error is not column specific.
  std::ptrdiff_t column() const noexcept { return column_; }

 private:
  std::ptrdiff_t column_;
};

/// A covariance formula hit a zero denominator (|rho| = 1 or a vanishing
/// fourth-moment variance term).
class SingularityError : public Error {
 public:
  using Error::Error;
};

/// Matrix is not symmetric positive semi-definite, even after jitter.
class NotPsdError : public Error {
 public:
  using Error::Error;
};

/// Invalid configuration or parameter combination.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// I + rho * A is not positive definite.
class ModelError : public Error {
 public:
  ModelError(const std::string& what, double rho_bound)
      : Error(what), rho_bound_(rho_bound) {}

  /// Admissible range is |rho| < rho_bound().
  double rho_bound() const noexcept { return rho_bound_; }

 private:
  double rho_bound_;
};

/// Malformed input file.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(what), line_(line) {}

  /// One-based line number of the offending record.
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace corrgraph
