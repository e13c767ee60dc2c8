#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cascade_clock {

/// Base of every error raised by the library. The CLI maps these to exit code 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument violates an operation's precondition (probability out of
/// range, vertex out of range, set-containment violated, ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file. `line()` is 1-based, 0 when not line-oriented.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// No prefix of the observed sequence accounts for exactly |S_0| vertices.
class InitialSetMismatch : public Error {
 public:
  using Error::Error;
};

/// Instance too large for an exhaustive routine.
class SizeError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace cascade_clock
