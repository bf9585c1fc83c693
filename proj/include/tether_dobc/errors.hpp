#pragma once

#include <stdexcept>
#include <string>

namespace tether_dobc {

/// Invalid or incomplete scenario configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The commanded virtual force cannot be realised by a thrust along -body z
/// (vertical component not pointing against gravity).
class AllocationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Simulation state left the numerically meaningful range.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace tether_dobc
