// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace edgeqed {

// Invalid user input: bad parameters, inconsistent qubit placement, malformed config.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Argument outside the region where a formula or mode exists.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A quadrature, propagator or eigensolver failed to reach its tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace edgeqed
