#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace polarity {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad command-line usage or an impossible combination of options.
class UsageError : public Error {
 public:
  using Error::Error;
};

/// Malformed or inconsistent input data (files, corpora, numeric inputs).
class InputError : public Error {
 public:
  using Error::Error;
};

class InvalidCorpus : public InputError {
 public:
  using InputError::InputError;
};

/// An operation was applied to an object in the wrong state.
class InvalidState : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Price series do not cover the requested window.
class CoverageError : public InputError {
 public:
  using InputError::InputError;
};

/// A statistical model cannot be estimated from the given data.
class EstimationError : public Error {
 public:
  using Error::Error;
};

/// Numerical failure that the caller asked to treat as fatal.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class ParseError : public InputError {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& what)
      : InputError(source + ":" + std::to_string(line) + ": " + what),
        source_(source),
        line_(line) {}

  const std::string& source() const noexcept { return source_; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::string source_;
  std::size_t line_;
};

}  // namespace polarity
