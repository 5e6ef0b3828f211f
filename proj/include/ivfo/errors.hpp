#pragma once

#include <stdexcept>
#include <string>

namespace ivfo {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Two coordinates differ symbolically but their numeric values are within
// tolerance; supply more digits for the irrational lengths.
class PrecisionError : public Error {
 public:
  using Error::Error;
};

// An enumeration or search exceeded its configured budget.
class BudgetError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& msg, int line, int column)
      : Error(format(msg, line, column)), line_(line), column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  static std::string format(const std::string& msg, int line, int column) {
    return std::to_string(line) + ":" + std::to_string(column) + ": " + msg;
  }
  int line_;
  int column_;
};

// Set quantifiers appearing in an FO-only context.
class DialectError : public Error {
 public:
  using Error::Error;
};

class SetQuantifierBudgetError : public Error {
 public:
  using Error::Error;
};

class UnboundVariableError : public Error {
 public:
  using Error::Error;
};

// Representation or structure violates its declared invariants.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class MalformedExpression : public Error {
 public:
  using Error::Error;
};

class IrrationalLength : public Error {
 public:
  using Error::Error;
};

class SpanViolation : public Error {
 public:
  using Error::Error;
};

class TooSmall : public Error {
 public:
  using Error::Error;
};

}  // namespace ivfo
