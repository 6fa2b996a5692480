#pragma once

#include <stdexcept>

namespace simbench {

/// Bad study or registry configuration (unknown names, invalid values).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition shared between modules was violated, e.g. pooling scores
/// standardized under different schemes.
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace simbench
