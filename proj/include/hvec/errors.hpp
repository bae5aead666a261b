#pragma once

#include <stdexcept>
#include <string>

namespace hvec {

// Mismatched operand lengths (qubit counts, vector sizes).
struct DimensionError : std::invalid_argument {
  explicit DimensionError(const std::string& msg) : std::invalid_argument(msg) {}
};

// Argument outside the mathematically valid range.
struct DomainError : std::invalid_argument {
  explicit DomainError(const std::string& msg) : std::invalid_argument(msg) {}
};

// Request exceeds the enumeration/memory bounds this artifact supports.
struct CapacityError : std::runtime_error {
  explicit CapacityError(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad CLI flags or config file contents.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace hvec
