/*
 * Copyright 2026 The stkernels Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *
 */
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace stk {

// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid input: bad parameters, malformed files, inconsistent sizes.
class ConfigError : public Error {
 public:
  using Error::Error;
};

class DomainError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class RegimeError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class DimensionMismatch : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class LagOutOfRange : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class EmptyDataset : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

// A computation ran but could not deliver a trustworthy number.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class QuadratureFailure : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NotPositiveDefinite : public NumericalError {
 public:
  NotPositiveDefinite(const std::string& what, std::size_t pivot)
      : NumericalError(what), pivot_(pivot) {}
  std::size_t pivot() const { return pivot_; }

 private:
  std::size_t pivot_;
};

class NegativeVariance : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class AllBinsSkipped : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace stk
