/*
 * Copyright 2026 The sdm Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef SDM_ERROR_H_
#define SDM_ERROR_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sdm {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input text. `line` is 1-based; 0 when the error is not tied to a
// line.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& message)
      : Error(line == 0 ? message
                        : "line " + std::to_string(line) + ": " + message),
        line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Well-formed input that cannot support the requested computation (single
// class labels, not enough samples, every point dropped, ...).
class DataError : public Error {
 public:
  using Error::Error;
};

// Caller-side misconfiguration: bad hyperparameters, feature schema
// mismatches, missing files.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace sdm

#endif  // SDM_ERROR_H_
