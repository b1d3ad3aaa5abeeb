#pragma once

#include <stdexcept>
#include <string>

namespace edgeharden {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Generator configuration that cannot produce a valid instance.
class InvalidConfig : public Error {
 public:
  using Error::Error;
};

/// Argument outside an operation's domain (negative coefficients, a search
/// space above the enumeration guard, a bad sweep parameter).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Instance or solution file that cannot be read. The message carries the
/// line number and field name.
class ParseError : public Error {
 public:
  ParseError(const std::string& msg, int line, std::string field)
      : Error(format(msg, line, field)), line_(line), field_(std::move(field)) {}

  int line() const noexcept { return line_; }
  const std::string& field() const noexcept { return field_; }

 private:
  static std::string format(const std::string& msg, int line, const std::string& field) {
    std::string out = "line " + std::to_string(line);
    if (!field.empty()) out += " (" + field + ")";
    return out + ": " + msg;
  }

  int line_;
  std::string field_;
};

/// Misuse of the model-building API (duplicate names, foreign references).
class ModelError : public Error {
 public:
  using Error::Error;
};

/// Solver output that violates declared integrality or model rows.
class CorruptSolution : public Error {
 public:
  using Error::Error;
};

/// No usable solver backend, or a backend that is misconfigured.
class EnvironmentError : public Error {
 public:
  using Error::Error;
};

}  // namespace edgeharden
