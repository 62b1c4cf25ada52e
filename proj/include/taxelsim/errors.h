// Copyright 2026 The TaxelSim Authors
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

#ifndef TAXELSIM_ERRORS_H_
#define TAXELSIM_ERRORS_H_

#include <stdexcept>
#include <string>

namespace taxelsim {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad or inconsistent configuration: JSON schema violations, ill-ordered
// ranges, missing files. The CLI maps this to exit code 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

class InvalidRotationError : public Error {
 public:
  using Error::Error;
};

// Zero or parallel inputs where a frame must be constructed.
class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

// Joint state dimensions do not match the hand model.
class ModelMismatchError : public Error {
 public:
  using Error::Error;
};

// Shape parameters non-positive, or a mesh that is open/non-convex.
class InvalidShapeError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class ContractViolationError : public Error {
 public:
  using Error::Error;
};

class DegenerateFitError : public Error {
 public:
  using Error::Error;
};

// A non-finite value appeared in the simulation state. Exit code 3.
class PoisonedStateError : public Error {
 public:
  using Error::Error;
};

}  // namespace taxelsim

#endif  // TAXELSIM_ERRORS_H_
