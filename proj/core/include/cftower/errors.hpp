#pragma once

#include <stdexcept>
#include <string>

namespace cft {

/// Precondition failures and malformed arguments (CLI exit status 1).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A mathematical invariant that must hold did not (CLI exit status 2).
class InvariantViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a malformed report document is parsed.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cft
