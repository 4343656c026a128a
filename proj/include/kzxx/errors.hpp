#pragma once

#include <stdexcept>
#include <string>

namespace kzxx {

// Leg/shape/charge inconsistencies detected while assembling tensor networks.
struct StructureError : std::runtime_error {
  explicit StructureError(const std::string& msg) : std::runtime_error(msg) {}
};

// A requested problem size exceeds a hard backend limit.
struct CapacityError : std::runtime_error {
  explicit CapacityError(const std::string& msg) : std::runtime_error(msg) {}
};

// An iterative solver ran out of iterations before reaching its tolerance.
struct ConvergenceError : std::runtime_error {
  double last_metric = 0.0;
  ConvergenceError(const std::string& msg, double metric)
      : std::runtime_error(msg), last_metric(metric) {}
};

// Fit input carries no usable signal (all points below the floor).
struct NoSignalError : std::runtime_error {
  explicit NoSignalError(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid or inconsistent run configuration.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace kzxx
