#pragma once

#include <stdexcept>
#include <string>

namespace causal {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed graph structure (cycles, self-loops, dangling endpoints).
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// A variable that is not a vertex of the graph it was looked up in.
class LookupError : public Error {
 public:
  using Error::Error;
};

/// Arguments that violate an operation's stated precondition.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// An input that breaks an algorithmic contract (e.g. a non pi-consistent
/// atomic expression handed to simplify).
class ContractViolation : public Error {
 public:
  using Error::Error;
};

/// Numeric evaluation failure, e.g. a zero denominator cell.
class EvaluationError : public Error {
 public:
  using Error::Error;
};

/// Text that does not follow one of the input grammars. Carries the 1-based
/// line and column of the offending character.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t column)
      : Error(format(message, line, column)), line_(line), column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  static std::string format(const std::string& message, std::size_t line, std::size_t column) {
    return std::to_string(line) + ":" + std::to_string(column) + ": " + message;
  }

  std::size_t line_;
  std::size_t column_;
};

}  // namespace causal
