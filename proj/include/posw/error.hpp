#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace posw {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad user configuration: unknown model, empty grid, overlapping splits...
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Bad input data. Carries an optional location (line number or byte offset).
class DataError : public Error {
 public:
  using Error::Error;
};

class ParseError : public DataError {
 public:
  ParseError(const std::string& what, std::size_t location)
      : DataError(what), location_(location) {}
  std::size_t location() const noexcept { return location_; }

 private:
  std::size_t location_;
};

// Persisted artifact problems: not found, truncated, wrong version.
class FormatError : public DataError {
 public:
  using DataError::DataError;
};

class VersionError : public FormatError {
 public:
  using FormatError::FormatError;
};

}  // namespace posw
