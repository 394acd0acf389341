// Copyright 2026 The pushid Authors
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

#ifndef PUSHID_ERROR_HPP_
#define PUSHID_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace pushid {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed arguments: dimension mismatch, NaN inputs, invalid actions.
class InputError : public Error {
 public:
  using Error::Error;
};

// Invalid configuration values (time step, table geometry, grids).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Covariance could not be factorized even after jitter escalation.
class NumericalError : public Error {
 public:
  using Error::Error;
};

// The optimizer could not produce a single valid evaluation.
class SearchError : public Error {
 public:
  using Error::Error;
};

// Raised by select_next when every candidate has been evaluated.
class ExhaustedError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& reason)
      : Error("line " + std::to_string(line) + ": " + reason), line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

}  // namespace pushid

#endif  // PUSHID_ERROR_HPP_
