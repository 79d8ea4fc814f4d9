// Copyright 2026 The Proposal Programs Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace propprog {

// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& message) : std::runtime_error(message) {}
};

// A value was requested with a type tag it does not carry.
class TypeError : public Error {
 public:
  using Error::Error;
};

// An execution visited the same address twice.
class DuplicateAddressError : public Error {
 public:
  using Error::Error;
};

// An address required by an output selection or constraint set was never
// realized by the execution, or a constraint was left unconsumed.
class MissingOutputError : public Error {
 public:
  using Error::Error;
};

// A constrained output trace and an output selection disagree about which
// addresses form the output set.
class SelectionMismatchError : public Error {
 public:
  using Error::Error;
};

// A distribution was constructed with invalid parameters.
class InvalidParamsError : public Error {
 public:
  using Error::Error;
};

// A value lies outside the support of a distribution in a context where
// that is not recoverable (for example gradient evaluation).
class OutOfSupportError : public Error {
 public:
  using Error::Error;
};

// A special function was evaluated outside its domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Exhaustive enumeration was requested for a program with non-enumerable
// (continuous or unscripted) randomness.
class NonEnumerableError : public Error {
 public:
  using Error::Error;
};

// Exhaustive enumeration exceeded its trace budget.
class BranchLimitError : public Error {
 public:
  using Error::Error;
};

// Every importance weight in a sampling run was zero.
class AllWeightsZeroError : public Error {
 public:
  using Error::Error;
};

// Every replicate in a gradient estimation batch had zero output
// probability.
class DegenerateBatchError : public Error {
 public:
  using Error::Error;
};

// A gradient with non-finite entries reached the optimizer.
class NonFiniteGradientError : public Error {
 public:
  using Error::Error;
};

// Tensor shapes disagree.
class ShapeMismatchError : public Error {
 public:
  using Error::Error;
};

// A configuration file failed validation.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A file could not be read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace propprog
