#pragma once

#include <stdexcept>
#include <string>

namespace spectune {

// Base class for all library errors so callers can catch one type.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Violated precondition or malformed argument.
class ArgumentError : public Error {
public:
  using Error::Error;
};

// Input file header/layout does not match the canonical schema.
class SchemaError : public Error {
public:
  using Error::Error;
};

// A specific data row failed to parse or validate.
class DataError : public Error {
public:
  DataError(const std::string& msg, std::size_t row)
      : Error(msg + " (row " + std::to_string(row) + ")"), row_(row) {}
  std::size_t row() const { return row_; }

private:
  std::size_t row_;
};

// Tensor/matrix dimensions are inconsistent.
class ShapeError : public Error {
public:
  using Error::Error;
};

// Degenerate input: flat spectrum, empty split partition, etc.
class DegenerateError : public Error {
public:
  using Error::Error;
};

// Training produced a non-finite loss.
class DivergenceError : public Error {
public:
  DivergenceError(const std::string& msg, int epoch)
      : Error(msg + " (epoch " + std::to_string(epoch) + ")"), epoch_(epoch) {}
  int epoch() const { return epoch_; }

private:
  int epoch_;
};

// Trial log is corrupt; reports the offending line.
class LogError : public Error {
public:
  LogError(const std::string& msg, std::size_t line)
      : Error(msg + " (line " + std::to_string(line) + ")"), line_(line) {}
  std::size_t line() const { return line_; }

private:
  std::size_t line_;
};

}  // namespace spectune
