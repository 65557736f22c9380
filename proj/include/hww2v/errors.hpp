#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hww2v {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Missing or unreadable input files.
class InputError : public Error {
 public:
  using Error::Error;
};

class DecodeError : public Error {
 public:
  DecodeError(const std::string& reason, std::size_t line)
      : Error(reason + " (line " + std::to_string(line) + ")"), reason_(reason), line_(line) {}
  std::size_t line() const noexcept { return line_; }
  const std::string& reason() const noexcept { return reason_; }

 private:
  std::string reason_;
  std::size_t line_;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

// Model files that fail the container checks.
class FormatError : public Error {
 public:
  using Error::Error;
};

// Inconsistent configuration: missing artifacts, bad hyperparameters,
// representation/model mismatch.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace hww2v
