// Copyright 2026 The Helmlab Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace helmlab {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input text (parameter documents, CSV files, CLI colors).
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what,
                      std::optional<std::size_t> line = std::nullopt)
      : Error(line ? "line " + std::to_string(*line) + ": " + what : what),
        line_(line) {}

  std::optional<std::size_t> line() const { return line_; }

 private:
  std::optional<std::size_t> line_;
};

// Well-formed input that violates an invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// An operation was asked to run in a configuration it cannot support,
// e.g. neutral correction enabled without a lookup table.
class ConfigurationError : public Error {
 public:
  using Error::Error;
};

// A non-finite value appeared inside a numerical pipeline.
class NumericError : public Error {
 public:
  NumericError(std::string stage, const std::string& what)
      : Error(stage + ": " + what), stage_(std::move(stage)) {}

  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

class ConvergenceError : public NumericError {
 public:
  ConvergenceError(std::string stage, double residual)
      : NumericError(std::move(stage), "Newton iteration did not converge (residual " +
                                           std::to_string(residual) + ")"),
        residual_(residual) {}

  double residual() const { return residual_; }

 private:
  double residual_;
};

class LutConstructionError : public NumericError {
 public:
  explicit LutConstructionError(const std::string& what)
      : NumericError("neutral-correction", what) {}
};

class FitError : public NumericError {
 public:
  explicit FitError(const std::string& what) : NumericError("fit", what) {}
};

// A design constraint (contrast ratio) cannot be met at any lightness.
class UnachievableError : public Error {
 public:
  UnachievableError(const std::string& what, double best)
      : Error(what), best_(best) {}

  double best_achievable() const { return best_; }

 private:
  double best_;
};

// Process exit code for an error: 1 input, 2 numeric, 3 unachievable.
inline int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const UnachievableError*>(&e)) return 3;
  if (dynamic_cast<const NumericError*>(&e)) return 2;
  return 1;
}

}  // namespace helmlab
