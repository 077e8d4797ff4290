#pragma once

#include <stdexcept>
#include <string>

namespace rdkw {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidDimension : public Error {
 public:
  using Error::Error;
};

/// delta <= 0 passed to a gradient estimator.
class InvalidSensitivity : public Error {
 public:
  using Error::Error;
};

/// A measurement or direction handed to an estimator was not finite.
class EstimationError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// NMSE requested with theta0 == theta_star.
class UndefinedMetric : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace rdkw
