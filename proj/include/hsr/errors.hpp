#pragma once

#include <stdexcept>
#include <string>

namespace hsr {

// Raised when a configuration value violates an invariant; the message
// names the offending field.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace hsr
