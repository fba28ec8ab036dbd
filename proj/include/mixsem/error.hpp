#pragma once

#include <stdexcept>
#include <string>

namespace mixsem {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed text input: type expressions, tensor files, lexica, corpora.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Tensor shapes, dimensions or index lists that do not fit together.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// A sentence whose types do not reduce to the requested target.
class NoReduction : public Error {
 public:
  using Error::Error;
};

/// Inputs that are well-formed but unusable (empty corpora, zero vectors, unknown words).
class DataError : public Error {
 public:
  using Error::Error;
};

/// A mathematical invariant does not hold (non-PSD operator, trace != 1, ...).
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace mixsem
