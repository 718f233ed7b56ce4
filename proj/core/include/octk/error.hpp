#pragma once

#include <stdexcept>
#include <string>

namespace octk {

/// Base class for every error the toolkit raises.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid construction arguments or a violated precondition.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A numerical routine could not complete (step underflow, non-finite state).
class NumericalError : public Error {
 public:
  NumericalError(const std::string& what, double time_reached)
      : Error(what), time_reached_(time_reached) {}
  explicit NumericalError(const std::string& what) : Error(what) {}

  double time_reached() const noexcept { return time_reached_; }

 private:
  double time_reached_ = 0.0;
};

/// Malformed run configuration; `field()` names the offending key path.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& what)
      : Error(field + ": " + what), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace octk
