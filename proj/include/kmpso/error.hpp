#pragma once

#include <stdexcept>
#include <string>

namespace kmpso {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller broke an operation's precondition (length mismatch, bad index).
class ContractError : public Error {
 public:
  using Error::Error;
};

/// Invalid optimizer or experiment configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Malformed, missing or inconsistent input data.
class DataError : public Error {
 public:
  using Error::Error;
};

/// Parse failure tied to a line of a delimited input file (1-based).
class ParseError : public DataError {
 public:
  ParseError(std::size_t row, const std::string& what)
      : DataError("row " + std::to_string(row) + ": " + what), row_(row) {}

  std::size_t row() const noexcept { return row_; }

 private:
  std::size_t row_;
};

}  // namespace kmpso
