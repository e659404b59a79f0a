// Copyright 2026 The qpriv Authors
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

#ifndef QPRIV_ERRORS_HPP
#define QPRIV_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace qpriv {

/// Base class for all qpriv exceptions.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Bad or inconsistent user input (matrix shapes, ranges, documents).
struct InputError : Error {
  using Error::Error;
};

/// An internal numerical routine failed to meet its own tolerance.
struct NumericalError : Error {
  using Error::Error;
};

struct NotHermitianError : InputError {
  using InputError::InputError;
};
struct NotPsdError : InputError {
  using InputError::InputError;
};
struct DimensionMismatchError : InputError {
  using InputError::InputError;
};
struct DimensionOverflowError : InputError {
  using InputError::InputError;
};
struct ZeroVectorError : InputError {
  using InputError::InputError;
};
struct OutOfRangeError : InputError {
  using InputError::InputError;
};
struct EmptyRelationError : InputError {
  using InputError::InputError;
};
struct DeltaNotZeroError : InputError {
  using InputError::InputError;
};
struct ZeroMixingError : InputError {
  using InputError::InputError;
};
struct WrongModeError : InputError {
  using InputError::InputError;
};
struct ParseError : InputError {
  using InputError::InputError;
};
struct ValidationError : InputError {
  using InputError::InputError;
};

struct NoConvergenceError : NumericalError {
  using NumericalError::NumericalError;
};
struct InfeasibleToleranceError : NumericalError {
  using NumericalError::NumericalError;
};
struct DualGapError : NumericalError {
  using NumericalError::NumericalError;
};

}  // namespace qpriv

#endif  // QPRIV_ERRORS_HPP
