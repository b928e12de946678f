#pragma once

#include <span>
#include <vector>

#include "dnf/grid.hpp"
#include "dnf/model.hpp"
#include "dnf/oracle.hpp"
#include "dnf/stepper.hpp"

namespace dnf {

/// Ordinary least squares fit y = slope * x + intercept with coefficient of
/// determination. degenerate is set when all y agree exactly (SS_tot = 0,
/// reported with r2 = 1). Throws std::invalid_argument for fewer than two
/// distinct abscissae.
struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  bool degenerate = false;
};

FitResult linear_fit(std::span<const double> x, std::span<const double> y);

/// Configuration of the diffusivity sweep. nus[0] must be 0 (the reference
/// run) and the list strictly increasing with at least three entries.
struct SweepConfig {
  ModelSpec model;
  GridSpec grid;
  TimeGrid time;
  std::vector<double> nus;
  int threads = 1;  ///< diffusive runs may execute concurrently
};

/// Sweep outcome: the (nu_k, e_k) pairs including the exact-zero reference
/// point, and the least-squares line fitted over the nu > 0 points only, so
/// the intercept stays a diagnostic of the linear scaling law.
struct SweepResult {
  std::vector<double> nus;
  std::vector<double> errors;
  FitResult fit;
};

/// Runs the reference (nu = 0) once with a snapshot at every step, then each
/// diffusive run streamed against it, recording
///   e_k = max_n ||v_nu^n - v^n||^2_{L2},
/// the same quantity rate_probe computes on stored trajectories. Aborts with
/// BlowupError naming the offending nu.
SweepResult nu_sweep(const SweepConfig& config);

/// x = 0 slices at the two probe times for one diffusivity.
struct ProfileSlices {
  double nu = 0.0;
  Field at_t1;
  Field at_t3;
  std::vector<double> slice_t1;  // v(0, xi_j) at t = 1
  std::vector<double> slice_t3;  // v(0, xi_j) at t = 3
};

/// Profile dynamics study: the diffusion-less run against one weakly
/// diffusive run (nu taken from the model, which must be > 0), sampled at
/// t = 1 and t = 3. Requires tau to divide 1 and T >= 3.
struct ProfileResult {
  ProfileSlices base;       // nu = 0
  ProfileSlices diffusive;  // nu = model.nu
};

ProfileResult profile_experiment(const ModelSpec& model, const GridSpec& grid,
                                 const TimeGrid& time);

/// Strict interior local maximum of a sampled slice.
struct LocalMax {
  int index = 0;
  double xi = 0.0;
  double value = 0.0;
};

/// All strict interior maxima (values[j] > both neighbours), in xi order.
std::vector<LocalMax> local_maxima(std::span<const double> values,
                                   std::span<const double> xi_nodes);

/// Width of the region where the slice stays above half its global maximum,
/// with linear interpolation at the two crossings.
double half_height_width(std::span<const double> values, std::span<const double> xi_nodes);

/// Which discretization parameter a convergence study refines.
enum class RefinementAxis { time, space };

/// Frozen-source linear problem used to verify the scheme's order against
/// the closed-form solution. The default data mixes a few cosine modes with
/// mild x-modulation; constant_data switches to the constant-preservation
/// case (v0 = 1, gamma = 0, N = 0), whose error sits at machine level.
struct OrderCheckConfig {
  double gamma = 0.5;
  double nu = 0.1;
  double L_x = 1.0;
  double L_xi = 3.0;
  int n_x = 4;
  double T = 1.0;
  std::vector<double> taus = {0.1, 0.05, 0.025};  // time study (fixed fine grid)
  int time_n_xi = 129;
  std::vector<int> n_xis = {9, 17, 33};  // space study (fixed small tau)
  double space_tau = 1e-4;
  bool constant_data = false;
};

struct OrderResult {
  std::vector<double> h;       ///< tau or h_xi, per refinement
  std::vector<double> errors;  ///< L2 error against the closed form at T
  double observed_order = 0.0;
  bool monotone = true;               ///< errors decreased at every refinement
  bool at_machine_precision = false;  ///< all errors negligible; order meaningless
};

OrderResult order_check(RefinementAxis axis, const OrderCheckConfig& config = {});

}  // namespace dnf
