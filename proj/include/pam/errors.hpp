// Copyright 2026 The PAM Authors
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

#ifndef PAM_ERRORS_HPP_
#define PAM_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace pam {

// Bad arguments: dimension mismatches, empty inputs, out-of-range sizes.
class InvalidInput : public std::invalid_argument {
 public:
  explicit InvalidInput(const std::string& what) : std::invalid_argument(what) {}
};

// Non-finite values produced during a numerical procedure.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

// A point that cannot be projected (behind or on the camera plane).
class ProjectionError : public NumericalError {
 public:
  explicit ProjectionError(const std::string& what) : NumericalError(what) {}
};

// Correlation requested on a sample with zero variance.
class UndefinedCorrelation : public NumericalError {
 public:
  explicit UndefinedCorrelation(const std::string& what) : NumericalError(what) {}
};

// Malformed or inconsistent input files.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace pam

#endif  // PAM_ERRORS_HPP_
