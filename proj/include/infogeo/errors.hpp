// Copyright 2026 The infogeo-sensor Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef INFOGEO_ERRORS_HPP
#define INFOGEO_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace infogeo {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A matrix expected to be symmetric positive-definite failed factorization.
class PositiveDefinitenessError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the domain of a function (e.g. kappa <= 0).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A sensor sits on the point whose bearing is requested.
class CoincidentError : public Error {
 public:
  using Error::Error;
};

class OverflowError : public Error {
 public:
  using Error::Error;
};

/// A quadrature integrand was non-finite at a node.
class NonFiniteFieldError : public Error {
 public:
  NonFiniteFieldError(const std::string& what, std::size_t node)
      : Error(what), node_(node) {}
  std::size_t node() const noexcept { return node_; }

 private:
  std::size_t node_;
};

/// The induced metric on the sensor manifold is singular.
class DegenerateGeometryError : public Error {
 public:
  using Error::Error;
};

/// A finite-difference perturbation left the SPD cone.
class StepTooLargeError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line, std::string key)
      : Error(what), line_(line), key_(std::move(key)) {}
  int line() const noexcept { return line_; }
  const std::string& key() const noexcept { return key_; }

 private:
  int line_;
  std::string key_;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace infogeo

#endif  // INFOGEO_ERRORS_HPP
