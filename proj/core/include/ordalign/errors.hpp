// Copyright 2026 The ordalign Authors
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

#ifndef ORDALIGN_ERRORS_HPP_
#define ORDALIGN_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace ordalign {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: bad shapes, unknown labels, infeasible annotations.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Non-finite values encountered during optimization.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// File system or parse failure. Carries the offending path or locus.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace ordalign

#endif  // ORDALIGN_ERRORS_HPP_
