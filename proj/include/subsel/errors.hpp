#pragma once

#include <stdexcept>
#include <string>

namespace subsel {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid or inconsistent input data (non-finite values, shape mismatches,
/// parse failures).
class DataError : public Error {
 public:
  using Error::Error;
};

/// Missing or contradictory configuration (e.g. an objective that needs
/// parameters which were not supplied).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// An exhaustive computation was refused because the instance exceeds the
/// enumeration guard.
class GuardError : public Error {
 public:
  using Error::Error;
};

/// A query outside the domain of a restricted set function.
class DomainError : public Error {
 public:
  using Error::Error;
};

}  // namespace subsel
