#pragma once

#include <stdexcept>
#include <string>

namespace mtsearch {

// Thrown when a config value or argument violates a documented precondition.
// The message names the violated invariant; the CLI maps this to exit code 1.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Thrown when an enumeration would exceed the configured resource cap.
// The CLI maps this to exit code 2.
class CapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mtsearch
