#pragma once

#include <stdexcept>
#include <string>

namespace dnf {

/// Invalid configuration (bad file, bad key, violated invariant).
/// The command-line tool maps this to exit code 1.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Numerical blow-up detected while time stepping (non-finite values or a
/// runaway norm). The command-line tool maps this to exit code 2.
class BlowupError : public std::runtime_error {
 public:
  BlowupError(const std::string& msg, long step, double t)
      : std::runtime_error(msg), step(step), t(t) {}

  long step;  ///< index of the offending step
  double t;   ///< simulation time at which the abort happened
};

}  // namespace dnf
