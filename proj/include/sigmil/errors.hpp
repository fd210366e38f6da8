#pragma once

#include <stdexcept>
#include <string>

namespace sigmil {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid hyperparameters or inconsistent sizes supplied at construction time.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A rectangle, box or patch that does not fit inside the frame it addresses.
class BoundsError : public Error {
 public:
  using Error::Error;
};

/// Mismatched array shapes (frame sizes, feature matrix columns, label counts).
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Malformed user input: missing files, unparsable ground truth, misaligned rows.
class InputError : public Error {
 public:
  using Error::Error;
};

/// An image file that could not be decoded.
class DecodeError : public Error {
 public:
  using Error::Error;
};

}  // namespace sigmil
