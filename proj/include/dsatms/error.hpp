// Copyright 2026 The dsatms Authors
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

#include <stdexcept>
#include <string>

namespace dsatms {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input text (clause files, scene/model JSON).
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Well-formed input that violates an engine contract: duplicate declarations,
// unknown literals, missing masses, non-Horn justifications.
class SemanticError : public Error {
 public:
  using Error::Error;
};

// Evidence that cannot be combined: total conflict, Bel[nogoods] == 1.
class ConflictError : public Error {
 public:
  using Error::Error;
};

// Input exceeds the bound an exponential algorithm was configured for.
class LimitError : public Error {
 public:
  using Error::Error;
};

}  // namespace dsatms
