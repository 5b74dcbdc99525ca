#pragma once

#include <stdexcept>

namespace monofit {

// Base class for all monofit errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Parameter outside the family's allowed interval.
struct DomainError : Error {
  using Error::Error;
};

// Data violates a family's observable set or an input content rule.
struct ValidationError : Error {
  using Error::Error;
};

// Malformed shape: empty table or level, index out of range, length mismatch.
struct StructuralError : Error {
  using Error::Error;
};

// Invalid operation configuration.
struct ConfigError : Error {
  using Error::Error;
};

}  // namespace monofit
