#pragma once

#include <stdexcept>
#include <string>

namespace kmu {

// Base of every error raised by the library. The CLI maps each subclass to
// a distinct process exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid argument or model parameter.
class ParameterError : public Error {
 public:
  using Error::Error;
};

// Mismatched dimensions, empty or malformed data.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// The requested problem has no admissible solution (e.g. k larger than the
// number of distinct observations).
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

// A numerical procedure could not produce a valid result.
class NumericalError : public Error {
 public:
  using Error::Error;
};

// Valid input the implementation deliberately does not handle.
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

}  // namespace kmu
