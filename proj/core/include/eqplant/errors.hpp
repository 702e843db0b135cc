#pragma once

#include <stdexcept>

namespace eqplant {

// Raised when a request is well-formed but cannot be satisfied by the model:
// inconsistent systems, exhausted attempt budgets, oversized enumerations.
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised for malformed input files. Messages carry the line or field at fault.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace eqplant
