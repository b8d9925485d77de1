#pragma once

#include <stdexcept>
#include <string>

namespace conefix {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shape problems: dimension mismatch, empty input, non-finite coordinates.
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// A point (input or map output) lies outside the sampling box of a space.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Parameter constraints violated (contraction constants, k < 0, K >= 1, ...).
class ConstraintError : public Error {
 public:
  using Error::Error;
};

}  // namespace conefix
