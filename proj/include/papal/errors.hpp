#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace papal {

/// Base of every error the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed formula, model file or QBF text.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, std::vector<std::string> expected,
             const std::string& detail)
      : Error(format(line, column, expected, detail)),
        line_(line),
        column_(column),
        expected_(std::move(expected)) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  static std::string format(std::size_t line, std::size_t column,
                            const std::vector<std::string>& expected,
                            const std::string& detail) {
    std::string msg = "syntax error at " + std::to_string(line) + ":" +
                      std::to_string(column) + ": " + detail;
    if (!expected.empty()) {
      msg += " (expected one of:";
      for (const auto& e : expected) msg += " " + e;
      msg += ")";
    }
    return msg;
  }

  std::size_t line_;
  std::size_t column_;
  std::vector<std::string> expected_;
};

/// Well-formed input that does not fit the model it is used with
/// (undeclared atom or agent, unknown state, invalid model, ...).
class SemanticError : public Error {
 public:
  using Error::Error;
};

/// A configured resource cap was exceeded.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// An operation's precondition does not hold; carries an optional witness.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

}  // namespace papal
