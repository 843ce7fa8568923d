/**
 * @brief Shared error types and resource limits for the hourglass engine.
 */
#pragma once

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace hourglass {

/// Thrown on malformed or semantically invalid input (CLI exit code 2).
class ValidationError : public std::runtime_error {
public:
  explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Thrown when a search exceeds the configured node budget (CLI exit code 3).
class ResourceError : public std::runtime_error {
public:
  explicit ResourceError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Node budget for unbounded searches (move classes, basis enumeration, ...).
/// Overridable via the HOURGLASS_MAX_NODES environment variable.
inline std::size_t max_search_nodes() {
  static const std::size_t cap = [] {
    if (const char* env = std::getenv("HOURGLASS_MAX_NODES")) {
      char* end = nullptr;
      unsigned long long v = std::strtoull(env, &end, 10);
      if (end && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
    }
    return static_cast<std::size_t>(5'000'000);
  }();
  return cap;
}

}  // namespace hourglass
