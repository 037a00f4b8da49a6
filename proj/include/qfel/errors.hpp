#pragma once

#include <stdexcept>
#include <string>

namespace qfel {

// Invalid or inconsistent user input (config keys, parameter domains).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical failure: quadrature non-convergence, truncation cap hit,
// steady-state iteration stall.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

// Filesystem failure while emitting results.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace qfel
