#pragma once

#include <memory>

#include "dnf/grid.hpp"

namespace dnf {

/// Logistic firing rate S(u) = 1 / (1 + exp(-mu*(u - theta))).
struct FiringRateSpec {
  double mu = 0.0;     ///< gain, >= 0
  double theta = 0.0;  ///< threshold

  bool operator==(const FiringRateSpec&) const = default;
};

/// Separable synaptic kernel
///   W(x, xi, x', xi') = (kappa/2) exp(-|x-x'|) delta_sigma(xi - xi0) delta_sigma(xi'),
/// coupling activity near the somatic leaf xi' = 0 to contact points near
/// xi = xi0, with exponential lateral falloff along the cortex.
struct KernelSpec {
  double kappa = 0.0;  ///< coupling strength
  double sigma = 0.0;  ///< dendritic spread, > 0
  double xi0 = 0.0;    ///< target leaf coordinate, inside (-L_xi, L_xi)

  bool operator==(const KernelSpec&) const = default;
};

/// Localized initial bump v0(x, xi) = alpha(|x|) * delta_sigma(xi), where
/// alpha reuses the sigmoid shape with its own steepness/half-width pair:
/// alpha(x) = 1 - S(x; rho, x0).
struct InitialConditionSpec {
  double rho = 0.0;    ///< steepness of the x cutoff
  double x0 = 0.0;     ///< half-width of the x plateau
  double sigma = 0.0;  ///< xi spread, > 0

  bool operator==(const InitialConditionSpec&) const = default;
};

/// Full model: dv/dt = (-gamma + nu * d^2/dxi^2) v + F(v) + G.
struct ModelSpec {
  double gamma = 0.0;  ///< decay rate, >= 0
  double nu = 0.0;     ///< dendritic diffusivity, >= 0
  FiringRateSpec firing;
  KernelSpec kernel;
  InitialConditionSpec init;

  /// External input G, constant in time; nullptr means G == 0.
  std::shared_ptr<const Field> input;
};

/// Normalized Gaussian bump delta_sigma(xi) = exp(-(xi/sigma)^2) / (sigma sqrt(pi)).
/// Unit integral over the real line, even in xi, peak 1/(sigma sqrt(pi)) at 0.
/// Throws std::invalid_argument for sigma <= 0.
double delta_profile(double xi, double sigma);

/// S(u); monotone, in (0, 1), saturation-safe for large |mu*(u-theta)|.
double firing_rate(double u, const FiringRateSpec& spec);

/// S'(u) = mu * S(u) * (1 - S(u)); supremum mu/4, attained at u = theta.
double firing_rate_deriv(double u, const FiringRateSpec& spec);

/// Exact periodization of (kappa/2) exp(-|r|) on a circle of circumference c:
/// the closed form of the image sum over all torus translates, evaluated at
/// distance d in [0, c].
double periodized_exp_kernel(double kappa, double circumference, double d);

/// Samples v0 on the grid. Even in x by construction.
Field initial_condition(std::shared_ptr<const Grid> grid, const InitialConditionSpec& spec);

/// A priori bound/Lipschitz constant of the nonlocal operator:
///   K_F = ||W||_{L2(Omega x Omega)} * max(|Omega|^{1/2} * sup|S|, sup|S'|)
/// with sup|S| = 1 and sup|S'| = mu/4 for the logistic rate. ||W||^2 factors
/// into three 1-D integrals (periodized x part, two Gaussian xi parts), each
/// evaluated by composite Simpson quadrature at a fixed fine resolution,
/// independent of the simulation grid. The grid argument only supplies the
/// domain lengths.
double estimate_KF(const ModelSpec& model, const Grid& grid);

}  // namespace dnf
