// Copyright 2026 The tabeval Authors.
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

#ifndef TABEVAL_ERROR_HPP_
#define TABEVAL_ERROR_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tabeval {

// Root of every error thrown by the library. Callers that only need to report
// a failure catch this; the CLI maps subclasses to exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed JSON or a record that does not match the artifact schema.
class ParseError : public Error {
 public:
  ParseError(std::string file, std::size_t line, const std::string& what)
      : Error(file + ":" + std::to_string(line) + ": " + what),
        file_(std::move(file)),
        line_(line) {}

  const std::string& file() const { return file_; }
  std::size_t line() const { return line_; }

 private:
  std::string file_;
  std::size_t line_;
};

// A record or store violates one of the data invariants.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Missing manifest, bad flag combination, unknown reference method.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Caller-supplied arguments are inconsistent (shape mismatch, empty pool).
class InputError : public Error {
 public:
  using Error::Error;
};

// A metric is not defined on the input, e.g. AUC with a single class.
class UndefinedMetricError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  using Error::Error;
};

class UnsupportedError : public Error {
 public:
  using Error::Error;
};

}  // namespace tabeval

#endif  // TABEVAL_ERROR_HPP_
