#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace evoim {

// Base for recoverable failures caused by input data or configuration.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input text. Carries the 1-based line number when known (0 otherwise).
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

  // Same error with `context` (typically a file name) prefixed to the message.
  static ParseError in_context(const ParseError& e, const std::string& context) {
    ParseError out(e);
    static_cast<Error&>(out) = Error(context + ": " + e.what());
    return out;
  }

 private:
  std::size_t line_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// Input is well-formed but unusable, e.g. snapshots that do not grow.
class DataError : public Error {
 public:
  using Error::Error;
};

// Problem too large for an exhaustive routine.
class SizeError : public Error {
 public:
  using Error::Error;
};

// Caller broke a documented precondition.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

inline void require(bool condition, const char* message) {
  if (!condition) throw ContractViolation(message);
}

}  // namespace evoim
