#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace nbsim {

/// Bad argument to a pure computation (empty input, nonpositive bandwidth, ...).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Operation invoked outside its precondition (wrong architecture, wrong role).
class UsageError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct FieldError {
  std::string field;
  std::string reason;

  bool operator==(const FieldError&) const = default;
};

/// Scenario or cell configuration rejected. Carries every problem found,
/// each tagged with the config field path it refers to.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<FieldError> errors);
  ConfigError(std::string field, std::string reason);

  const std::vector<FieldError>& errors() const noexcept { return errors_; }

 private:
  std::vector<FieldError> errors_;
};

/// Failure while executing or writing results (I/O, filesystem).
class RuntimeFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace nbsim
