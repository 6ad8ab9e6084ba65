#pragma once

#include <stdexcept>
#include <string>

namespace neumann {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed straight-line program (bad operand index, missing input, ...).
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the supported domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Neumann series precondition violated (spectral radius of I - A >= 1).
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// Input file or document could not be parsed.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Dimensions of matrix operands disagree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

}  // namespace neumann
