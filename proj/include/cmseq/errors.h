// Copyright 2026 The cmseq Authors
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

#ifndef CMSEQ_ERRORS_H_
#define CMSEQ_ERRORS_H_

#include <stdexcept>
#include <string>

namespace cmseq {

// Malformed or unreadable input (files, CSV, JSON).
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Structurally invalid values: wrong shapes, non-finite entries, indefinite
// covariance blocks.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A matrix expected to be positive semidefinite has an eigenvalue below the
// allowed negative slack.
class IndefiniteError : public ValidationError {
 public:
  IndefiniteError(const std::string& what, double most_negative)
      : ValidationError(what), most_negative_(most_negative) {}

  double most_negative_eigenvalue() const { return most_negative_; }

 private:
  double most_negative_;
};

// An operation was asked to act on an input outside its domain, e.g. fitting
// a CM model to a covariance that is not CM.
class PreconditionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cmseq

#endif  // CMSEQ_ERRORS_H_
