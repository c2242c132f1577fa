// Copyright 2026 The Authors.
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

namespace mmf {

// Base for every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid argument: out-of-range coordinate, dimension mismatch, bad partition.
class DomainError : public Error {
 public:
  using Error::Error;
};

// A quantity the caller needs is not finite (infinite divergence in a
// subgradient, unbounded B, overflow in a Gibbs weight).
class NumericalError : public Error {
 public:
  using Error::Error;
};

// Raised when extended-real arithmetic hits infinity minus infinity.
class IndeterminateError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace mmf
