#pragma once

#include <stdexcept>
#include <string>

namespace covercheck {

/// Raised when an exact procedure would exceed its configured size budget
/// (cell-count caps, brute-force subset caps).
struct ResourceLimitError : std::runtime_error {
  explicit ResourceLimitError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace covercheck
