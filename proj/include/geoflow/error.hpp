#pragma once

#include <stdexcept>
#include <string>

namespace geoflow {

/// Bad or inconsistent user input (configuration, files, flags). Maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numerical procedure failed (non-convergence, instability). Maps to exit code 3.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace geoflow
