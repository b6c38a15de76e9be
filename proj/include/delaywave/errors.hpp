#pragma once

#include <stdexcept>
#include <string>

namespace delaywave {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter is missing, out of range, or the config document is malformed.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// tau or T is not an integer multiple of dt, or the CFL number exceeds 1.
class GridIncompatibility : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class InvalidProfile : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

/// The delay history no longer (or not yet) holds a requested time level.
class HistoryUnderflow : public Error {
 public:
  using Error::Error;
};

class NonPositiveEnergy : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace delaywave
