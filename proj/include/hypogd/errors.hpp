#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hypogd {

/// A dual-space coordinate exceeded the sinh/cosh overflow guard.
/// Saturating instead of throwing would silently corrupt regret accounting.
class OverflowGuardError : public std::runtime_error {
public:
  OverflowGuardError(std::size_t coordinate, double value)
      : std::runtime_error("dual coordinate " + std::to_string(coordinate) +
                           " = " + std::to_string(value) +
                           " exceeds the sinh/cosh overflow guard (|z| <= " +
                           std::to_string(kGuard) + ")"),
        coordinate(coordinate), value(value) {}

  static constexpr double kGuard = 700.0;

  std::size_t coordinate;
  double value;
};

/// A root finder failed to reach its tolerance within max_iterations.
class ConvergenceError : public std::runtime_error {
public:
  ConvergenceError(const std::string& what, double residual)
      : std::runtime_error(what + " (residual " + std::to_string(residual) + ")"),
        residual(residual) {}

  double residual;
};

} // namespace hypogd
