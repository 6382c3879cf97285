#pragma once

#include <stdexcept>
#include <string>

namespace rdr {

/// A parameter violates the hypothesis of the routine it was passed to.
class InvalidParameter : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed or inconsistent experiment configuration.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& key, const std::string& what)
      : std::runtime_error("config error at '" + key + "': " + what), key_(key) {}

  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

/// A simulation produced a non-finite or otherwise unusable number.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace rdr
