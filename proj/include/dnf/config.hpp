#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "dnf/experiments.hpp"
#include "dnf/grid.hpp"
#include "dnf/model.hpp"
#include "dnf/stepper.hpp"

namespace dnf {

/// Complete run description, parsed from the sectioned key=value format:
///
///   [grid]    n_x, n_xi (or scale = desk|full), L_x, L_xi
///   [model]   gamma, nu, kappa, sigma, xi0, mu, theta, rho, x0,
///             init_sigma (optional, defaults to sigma)
///   [time]    tau, T
///   [sweep]   nus (optional comma list, default 0,0.0125,0.025,0.05,0.1)
///   [output]  dir, snapshot_every, threads (all optional)
///
/// Unknown sections or keys are errors, so typos cannot silently fall back
/// to defaults.
struct RunConfig {
  GridSpec grid;

  double gamma = 0.0;
  double nu = 0.0;
  double kappa = 0.0;
  double sigma = 0.0;
  double xi0 = 0.0;
  double mu = 0.0;
  double theta = 0.0;
  double rho = 0.0;
  double x0 = 0.0;
  double init_sigma = 0.0;

  double tau = 0.0;
  double T = 0.0;

  std::vector<double> nus = {0.0, 0.0125, 0.025, 0.05, 0.1};

  std::string out_dir = "out";
  long snapshot_every = 20;
  int threads = 1;

  bool operator==(const RunConfig&) const = default;

  ModelSpec model() const;
  TimeGrid time() const;
  SweepConfig sweep() const;
};

/// Grid presets: desk scale keeps runs in the seconds range, full scale
/// reproduces the reference resolution (4096 x 1024).
void apply_scale_preset(RunConfig& cfg, bool full);

/// Throws ConfigError listing every violated invariant at once.
void validate_config(const RunConfig& cfg);

/// Parses and validates. Parse errors carry line numbers; missing required
/// keys are reported together.
RunConfig parse_config(const std::filesystem::path& path);

/// Emits a file parse_config maps back to an equal RunConfig.
void write_config(const RunConfig& cfg, const std::filesystem::path& path);

}  // namespace dnf
