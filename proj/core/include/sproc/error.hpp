#pragma once

#include <stdexcept>
#include <string>

namespace sproc {

/// Malformed or dimensionally inconsistent input. Maps to CLI exit code 1.
class InputError : public std::invalid_argument {
 public:
  explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

/// An arithmetic operation with no defined value, e.g. (+inf) + (-inf).
class ArithmeticError : public std::domain_error {
 public:
  explicit ArithmeticError(const std::string& what) : std::domain_error(what) {}
};

}  // namespace sproc
