#pragma once

#include <stdexcept>
#include <string>

namespace domp {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input violates a structural requirement (non-square matrix, ragged rows).
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// A parameter violates its documented domain (bad k, gamma, weights, ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// A size guard was exceeded (enumeration, brute force, bootstrap).
class SizeError : public Error {
 public:
  using Error::Error;
};

/// Malformed text input; the message carries the source and line.
class ParseError : public Error {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& what)
      : Error(source + ":" + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Iterative method did not converge within its budget.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// Broken internal invariant; indicates a bug rather than bad input.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace domp
