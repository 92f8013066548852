#pragma once

#include <stdexcept>
#include <string>

namespace slicesim {

/// Base of all recoverable errors raised for bad inputs.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or invariant-violating configuration. `field` is a dotted path
/// into the offending document (may be empty for whole-object checks).
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& message)
      : Error(field.empty() ? message : field + ": " + message), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// A request larger than the whole platform.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// Catalog or stream content that fails structural validation.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Bitstream/region geometry mismatch.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Metric requested for a record that cannot provide it (e.g. unfinished request).
class NotApplicableError : public Error {
 public:
  using Error::Error;
};

/// Mixing traces that do not share scenario and seed.
class ComparabilityError : public Error {
 public:
  using Error::Error;
};

/// Internal inconsistency in a simulation: a bug, never a user error.
class SimulationError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace slicesim
