#pragma once

#include <stdexcept>
#include <string>

namespace pentree {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter lies outside its documented range.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Malformed input data (dimension mismatch, bad CSV, bad tree text).
class InputError : public Error {
 public:
  using Error::Error;
};

/// Integer overflow in exact combinatorics.
class ArithmeticError : public Error {
 public:
  using Error::Error;
};

/// An exhaustive procedure would exceed its configured cap.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// Least-squares fit with too few points.
class FitError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace pentree
