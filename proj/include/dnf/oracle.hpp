#pragma once

#include <memory>
#include <vector>

#include "dnf/grid.hpp"
#include "dnf/stepper.hpp"

namespace dnf {

/// Neumann cosine eigenbasis of nu * d^2/dxi^2 - gamma on (-L_xi, L_xi):
///   psi_0(xi)   = sqrt(1/L),
///   psi_k(xi)   = sqrt(2/L) cos(k pi (xi + L_xi) / L),   L = 2 L_xi,
/// with eigenvalues lambda_k = -gamma - nu (k pi / L)^2. Orthonormal in
/// L2(-L_xi, L_xi); discretely orthonormal under trapezoid quadrature up to
/// O(h_xi^2).
struct CosineBasis {
  double L_xi = 0.0;
  int k_max = 0;

  double length() const { return 2.0 * L_xi; }
  double psi(int k, double xi) const;

  /// mu_k = nu * (k pi / L)^2, the diffusive part of -lambda_k.
  double mu_k(int k, double nu) const;
  double lambda(int k, double nu, double gamma) const { return -gamma - mu_k(k, nu); }
};

/// Per-x modal coefficients c(i, k) = (f(x_i, .), psi_k)_{L2(U)}.
struct ModalCoefficients {
  int n_x = 0;
  int k_max = 0;
  std::vector<double> c;  // n_x rows of k_max+1 coefficients

  double& at(int i, int k) { return c[static_cast<std::size_t>(i) * (k_max + 1) + k]; }
  double at(int i, int k) const { return c[static_cast<std::size_t>(i) * (k_max + 1) + k]; }
};

/// Trapezoid inner products per x-column. Requires k_max <= n_xi - 1.
ModalCoefficients project(const Field& field, const CosineBasis& basis);

/// Truncated synthesis sum_k c(i, k) psi_k(xi_j).
Field synthesize(const ModalCoefficients& coeffs, const CosineBasis& basis,
                 std::shared_ptr<const Grid> grid);

/// Exact solution of the frozen linear regular problem
///   dv/dt = (-gamma + nu d^2/dxi^2) v + N,   Neumann in xi,
/// with N constant in time: per mode,
///   g_k(t) = v0_k e^{lambda_k t} + N_k (1 - e^{lambda_k t}) / (-lambda_k),
/// the lambda_k = 0 limit being g_k(t) = v0_k + N_k t. Synthesis is
/// truncated at basis.k_max. n0 may be nullptr for N == 0.
Field linear_exact_regular(const Field& v0, const Field* n0, double t, double nu, double gamma,
                           const CosineBasis& basis);

/// Exact solution of the frozen linear singular problem (nu = 0), pointwise:
///   v(t) = v0 e^{-gamma t} + N (1 - e^{-gamma t}) / gamma,
/// the gamma = 0 limit being v0 + N t. No projection involved.
Field linear_exact_singular(const Field& v0, const Field* n0, double t, double gamma);

/// max over shared time-grid points of l2_distance_sq between paired
/// snapshots; the discrete L-infinity(0,T; L2)^2 distance. Both trajectories
/// must hold a snapshot at every step.
double rate_probe(const Trajectory& a, const Trajectory& b);

}  // namespace dnf
