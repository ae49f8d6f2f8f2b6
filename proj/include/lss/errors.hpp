#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lss {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid or inconsistent configuration. Maps to CLI exit code 1.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Any numerical failure: integration, fitting, degenerate statistics. Exit code 2.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class IntegrationError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class SteadyStateError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class RankError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class IllConditionedError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class DegenerateStatisticsError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// File system and file-content problems. Exit code 3.
class IoError : public Error {
 public:
  using Error::Error;
};

class ParseError : public IoError {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& what)
      : IoError(source + ":" + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace lss
