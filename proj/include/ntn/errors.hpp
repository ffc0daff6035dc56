#pragma once

#include <stdexcept>
#include <string>

namespace ntn {

/// Argument outside the mathematical domain of an operation (bad angle,
/// satellite below the surface, target below the horizon, ...).
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// Inconsistent or unusable configuration (beam past the limb, HPBW with no
/// main-lobe root, unknown scenario key, ...).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Bad command-line usage.
class UsageError : public std::runtime_error {
 public:
  explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ntn
