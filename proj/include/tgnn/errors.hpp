#pragma once

#include <stdexcept>
#include <string>

namespace tgnn {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operand shapes do not line up.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// A computation produced NaN or infinity.
class NumericError : public Error {
 public:
  using Error::Error;
};

// Invalid hyperparameter, probability, count, or other argument.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Malformed or inconsistent dataset / signal / checkpoint content.
class DataError : public Error {
 public:
  using Error::Error;
};

// Index outside a container's valid range.
class RangeError : public Error {
 public:
  using Error::Error;
};

}  // namespace tgnn
