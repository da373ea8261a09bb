#pragma once

#include <stdexcept>
#include <string>

namespace auginf {

// Exit codes used by the command line front end.
enum class ExitCode : int {
  kOk = 0,
  kConfig = 2,
  kData = 3,
  kDivergence = 4,
};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual ExitCode exit_code() const noexcept { return ExitCode::kConfig; }
};

/// Invalid hyperparameters, flags or conflicting options.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Shape mismatch between operands. The message names both shapes.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Violated call contract (e.g. backward on a non-scalar).
class ContractError : public Error {
 public:
  using Error::Error;
};

class DataError : public Error {
 public:
  using Error::Error;
  ExitCode exit_code() const noexcept override { return ExitCode::kData; }
};

/// Malformed input record; carries the 1-based line number.
class ParseError : public DataError {
 public:
  ParseError(std::size_t line, const std::string& what)
      : DataError("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// A record parsed but broke a type invariant; carries the sample id.
class ValidationError : public DataError {
 public:
  ValidationError(std::string sample_id, const std::string& what)
      : DataError("sample '" + sample_id + "': " + what), sample_id_(std::move(sample_id)) {}
  const std::string& sample_id() const noexcept { return sample_id_; }

 private:
  std::string sample_id_;
};

/// NaN/Inf in a loss or tensor.
class NumericalError : public Error {
 public:
  using Error::Error;
  ExitCode exit_code() const noexcept override { return ExitCode::kDivergence; }
};

}  // namespace auginf
