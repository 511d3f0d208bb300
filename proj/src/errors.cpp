#include "nbsim/errors.hpp"

namespace nbsim {
namespace {

std::string join(const std::vector<FieldError>& errors) {
  std::string out;
  for (const auto& e : errors) {
    if (!out.empty()) out += "; ";
    out += e.field + ": " + e.reason;
  }
  return out;
}

}  // namespace

ConfigError::ConfigError(std::vector<FieldError> errors)
    : std::runtime_error(join(errors)), errors_(std::move(errors)) {}

ConfigError::ConfigError(std::string field, std::string reason)
    : ConfigError(std::vector<FieldError>{{std::move(field), std::move(reason)}}) {}

}  // namespace nbsim
