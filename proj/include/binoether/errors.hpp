#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace binoether {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Expression text could not be parsed. `position` is a 0-based byte offset.
class ParseError : public Error {
 public:
  enum class Reason { Syntax, UnknownIdentifier, NonIntegerExponent };

  ParseError(Reason reason, std::size_t position, const std::string& what)
      : Error(what + " at position " + std::to_string(position)),
        reason_(reason),
        position_(position) {}

  Reason reason() const noexcept { return reason_; }
  std::size_t position() const noexcept { return position_; }

 private:
  Reason reason_;
  std::size_t position_;
};

/// Evaluation left the domain of an operation (x/0, ln of a non-positive value).
class DomainError : public Error {
 public:
  DomainError(const std::string& what, std::string subexpression)
      : Error(what + " in '" + subexpression + "'"), subexpression_(std::move(subexpression)) {}

  const std::string& subexpression() const noexcept { return subexpression_; }

 private:
  std::string subexpression_;
};

/// The Poisson bivector is (numerically) degenerate at the evaluation point.
class RegularityError : public Error {
 public:
  using Error::Error;
};

/// The secular polynomial has roots off the real axis.
class SpectrumError : public Error {
 public:
  using Error::Error;
};

class FlowError : public Error {
 public:
  using Error::Error;
};

class SystemFileError : public Error {
 public:
  SystemFileError(std::size_t line, std::size_t column, const std::string& message, const std::string& source = {})
      : Error((source.empty() ? "" : source + ": ") + "line " + std::to_string(line) + ", column " +
              std::to_string(column) + ": " + message),
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

}  // namespace binoether
