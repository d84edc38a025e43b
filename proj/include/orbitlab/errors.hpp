#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace orbitlab {

/// Base class for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands live in different coefficient rings.
class RingMismatch : public Error {
 public:
  using Error::Error;
};

/// A precondition on the arguments of an operation does not hold.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// An explicit search cap was reached before the search finished.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

/// An exact computation would exceed the configured size budget.
class BudgetExceeded : public Error {
 public:
  BudgetExceeded(const std::string& what, std::size_t completed_steps)
      : Error(what), completed_steps_(completed_steps) {}
  std::size_t completed_steps() const noexcept { return completed_steps_; }

 private:
  std::size_t completed_steps_;
};

/// An integer could not be completely factored within the configured limits.
class FactorizationFailure : public Error {
 public:
  using Error::Error;
};

/// Malformed polynomial text; position is a 0-based character offset.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " at position " + std::to_string(position)),
        position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

}  // namespace orbitlab
