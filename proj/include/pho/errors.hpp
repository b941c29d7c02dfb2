#pragma once

#include <stdexcept>
#include <string>

namespace pho {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Invalid arguments, malformed spaces/configurations, contract violations.
class ValidationError : public Error {
public:
  using Error::Error;
};

/// Unreadable, malformed or inconsistent input data (CSV, JSON files).
class DataError : public Error {
public:
  using Error::Error;
};

/// A metric could not be computed (e.g. AUC on single-class labels).
class MetricError : public Error {
public:
  using Error::Error;
};

} // namespace pho
