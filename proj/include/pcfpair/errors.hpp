#pragma once

#include <stdexcept>
#include <string>

namespace pcfpair {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Configuration / input-data problems. The CLI maps these to exit code 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

class ParseError : public ConfigError {
 public:
  ParseError(const std::string& what, std::size_t row)
      : ConfigError(what + " (row " + std::to_string(row) + ")"), row_(row) {}
  explicit ParseError(const std::string& what) : ConfigError(what) {}

  std::size_t row() const { return row_; }

 private:
  std::size_t row_ = 0;
};

// Numerical failures. The CLI maps these to exit code 3.
class NumericError : public Error {
 public:
  using Error::Error;
};

class RangeError : public NumericError {
 public:
  using NumericError::NumericError;
};

class BracketError : public NumericError {
 public:
  using NumericError::NumericError;
};

class DomainError : public NumericError {
 public:
  using NumericError::NumericError;
};

class DegenerateContinuumError : public NumericError {
 public:
  using NumericError::NumericError;
};

class SingularityError : public NumericError {
 public:
  using NumericError::NumericError;
};

class NotApplicableError : public NumericError {
 public:
  using NumericError::NumericError;
};

class SpanError : public NumericError {
 public:
  using NumericError::NumericError;
};

class NormalizationError : public NumericError {
 public:
  using NumericError::NumericError;
};

class ResampleError : public NumericError {
 public:
  using NumericError::NumericError;
};

class DataError : public NumericError {
 public:
  using NumericError::NumericError;
};

}  // namespace pcfpair
