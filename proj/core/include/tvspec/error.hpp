#pragma once

#include <stdexcept>
#include <string>

namespace tvspec {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Invalid argument or out-of-domain parameter.
class ParameterError : public Error {
public:
  using Error::Error;
};

/// Input data that cannot be processed (non-finite values, malformed files).
class DataError : public Error {
public:
  using Error::Error;
};

/// Invalid or unknown configuration entry.
class ConfigError : public Error {
public:
  using Error::Error;
};

/// Smoothing window contains no raw point with positive kernel weight.
class BandwidthTooSmallError : public ParameterError {
public:
  using ParameterError::ParameterError;
};

/// Requested quantity does not exist for this input (no ground truth,
/// no stored history, ...).
class UnavailableError : public Error {
public:
  using Error::Error;
};

/// Two planes or grids that must coincide do not.
class GridMismatchError : public Error {
public:
  using Error::Error;
};

}  // namespace tvspec
