#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace funceq {

/// Base class for every error thrown by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Expression text could not be parsed. `position` is a byte offset into
/// the input string.
class ParseError : public Error {
 public:
  ParseError(std::size_t position, const std::string& message)
      : Error("parse error at offset " + std::to_string(position) + ": " + message),
        position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// Differentiation reached a construct without a derivative rule
/// (min/max with a variable argument).
class UnsupportedDerivative : public Error {
 public:
  using Error::Error;
};

/// An expression produced a non-finite value where a finite one is required.
class EvaluationError : public Error {
 public:
  using Error::Error;
};

/// An argument left the domain it is restricted to (points outside [0,1],
/// negative densities, a contraction bound >= 1 where one is required, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Two grid functions with different resolutions were combined.
class ResolutionMismatch : public Error {
 public:
  using Error::Error;
};

/// An equation description is structurally invalid (map leaves [0,1],
/// derivative changes sign inside a declared piece, size mismatch, ...).
class InvalidSpec : public Error {
 public:
  using Error::Error;
};

/// Picard iteration was requested without a usable contraction bound.
class NotContraction : public Error {
 public:
  using Error::Error;
};

/// An iterate of the series vanished, so ratio-based diagnostics are
/// meaningless; the series is a finite sum.
class DegenerateInstance : public Error {
 public:
  using Error::Error;
};

/// Corpus lookup with a name that is not registered.
class UnknownEntry : public Error {
 public:
  using Error::Error;
};

/// A corpus parameter is outside the range the entry is defined for.
class ParamOutOfRange : public Error {
 public:
  using Error::Error;
};

/// A problem-description file is malformed. `line` is 1-based.
class SpecFileError : public Error {
 public:
  SpecFileError(int line, const std::string& message)
      : Error("line " + std::to_string(line) + ": " + message), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

}  // namespace funceq
