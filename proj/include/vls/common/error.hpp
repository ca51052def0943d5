#pragma once

#include <stdexcept>
#include <string>

namespace vls {

/// Invalid user configuration (bad parameter values, empty inputs, missing references).
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file. The message carries the file path and line number when known.
class ParseError : public std::runtime_error {
public:
  ParseError(const std::string& path, std::size_t line, const std::string& what)
      : std::runtime_error(path + ":" + std::to_string(line) + ": " + what), path_(path), line_(line) {}
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}

  const std::string& path() const noexcept { return path_; }
  std::size_t line() const noexcept { return line_; }

private:
  std::string path_;
  std::size_t line_ = 0;
};

/// Failure while a survey is running (no ground under a vehicle, worker failure).
class SimulationError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

}  // namespace vls
