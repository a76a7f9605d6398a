#pragma once

#include <stdexcept>
#include <string>

namespace hyperdev {

// Input that fails validation (bad parameters, malformed config/files).
struct config_error : std::invalid_argument {
  explicit config_error(const std::string& msg) : std::invalid_argument(msg) {}
};

// Filesystem / stream failures.
struct io_error : std::runtime_error {
  explicit io_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Work refused because it would exceed the configured enumeration budget.
struct budget_error : std::runtime_error {
  explicit budget_error(const std::string& msg) : std::runtime_error(msg) {}
};

// A hard mathematical check failed (identities that must hold exactly).
struct check_failure : std::runtime_error {
  explicit check_failure(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace hyperdev
