#pragma once

#include <stdexcept>
#include <string>

namespace ssam {

/// Root of the library's exception hierarchy. Each subclass maps to one
/// failure category; the CLI turns categories into exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad configuration: mismatched dimensions, invalid field values, unknown keys.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& field, const std::string& what)
      : Error(field.empty() ? what : field + ": " + what), field_(field) {}
  explicit ConfigError(const std::string& what) : ConfigError("", what) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// Non-finite loss, gradient, or update.
class NumericalError : public Error {
 public:
  NumericalError(const std::string& what, std::string group = {})
      : Error(group.empty() ? what : what + " (group '" + group + "')"), group_(std::move(group)) {}

  const std::string& group() const noexcept { return group_; }

 private:
  std::string group_;
};

/// Operation not available for this objective family (e.g. population gradient of a classifier).
class UnsupportedOperation : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Malformed input file. Carries the byte offset or line where parsing failed.
class FormatError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// A theory-check trajectory left the ball on which the bounded-gradient constant is valid.
class DomainViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace ssam
