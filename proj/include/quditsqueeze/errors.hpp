#pragma once

#include <stdexcept>
#include <string>

namespace qsq {

// Bad or inconsistent run configuration (CLI exit code 2).
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Numeric guard tripped: step size too coarse, state dimension too large
// (CLI exit code 3).
struct GuardError : std::runtime_error {
  explicit GuardError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace qsq
