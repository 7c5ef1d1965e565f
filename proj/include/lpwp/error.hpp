#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lpwp {

/// Base class for every recoverable input error raised by the library.
/// The CLI maps these to exit code 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A syntax error with a 1-based source position.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& message)
      : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
        line_(line),
        column_(column),
        message_(message) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }
  const std::string& message() const noexcept { return message_; }

 private:
  std::size_t line_;
  std::size_t column_;
  std::string message_;
};

/// A value that parsed fine but violates a domain invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Raised when the simplex pivot budget runs out. Deliberately not an
/// lpwp::Error: it signals numerical trouble, not bad input.
class IterationLimitError : public std::runtime_error {
 public:
  explicit IterationLimitError(std::size_t limit)
      : std::runtime_error("simplex iteration limit exceeded (" + std::to_string(limit) + " pivots)"),
        limit_(limit) {}

  std::size_t limit() const noexcept { return limit_; }

 private:
  std::size_t limit_;
};

}  // namespace lpwp
