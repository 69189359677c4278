#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace teamcheck {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Thrown by the formula parser. `position()` is a byte offset into the input.
class ParseError : public Error {
 public:
  enum class Kind { Syntax, NegatedCompound, ArityMismatch };

  ParseError(Kind kind, std::size_t position, const std::string& message)
      : Error("at " + std::to_string(position) + ": " + message),
        kind_(kind),
        position_(position) {}

  Kind kind() const noexcept { return kind_; }
  std::size_t position() const noexcept { return position_; }

 private:
  Kind kind_;
  std::size_t position_;
};

/// Malformed instance, DIMACS or graph file.
class FormatError : public Error {
 public:
  FormatError(std::size_t line, const std::string& message)
      : Error("line " + std::to_string(line) + ": " + message), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class UnknownName : public Error {
 public:
  using Error::Error;
};

/// A formula was handed to a procedure outside its fragment.
class FragmentError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Search limits hit; never reported as a negative verdict.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace teamcheck
