#pragma once

#include <stdexcept>
#include <string>

namespace bsmguard {

/// Base for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent configuration (CLI exit code 2).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Input data violating a stream or dataset contract (CLI exit code 3).
class DataError : public Error {
 public:
  using Error::Error;
};

/// Invalid numeric argument passed to a routine.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Non-finite observation handed to a detector; the detector state is left untouched.
class InputError : public Error {
 public:
  using Error::Error;
};

/// Model fitting diverged.
class TrainingError : public Error {
 public:
  using Error::Error;
};

}  // namespace bsmguard
