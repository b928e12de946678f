#pragma once

#include <memory>
#include <span>
#include <vector>

#include "dnf/grid.hpp"
#include "dnf/model.hpp"
#include "dnf/nonlocal.hpp"

namespace dnf {

/// Uniform time grid on [0, T]. T must be an integer multiple of tau.
struct TimeGrid {
  double tau = 0.0;
  double T = 0.0;
  long n_steps = 0;

  /// Validates tau > 0, T >= 0 and n_steps * tau == T to 1e-12 relative.
  static TimeGrid make(double tau, double T);

  double t(long n) const { return n * tau; }

  bool operator==(const TimeGrid&) const = default;
};

/// Prefactored tridiagonal solver for the implicit part of one IMEX step,
///   ((1 + tau*gamma) I - tau*nu*D2) v+ = rhs,
/// applied per x-column along xi. D2 is the second-order central difference
/// with mirrored-ghost Neumann closure: the boundary rows read
/// 2*(v_1 - v_0)/h^2 and 2*(v_{n-2} - v_{n-1})/h^2. The system is strictly
/// diagonally dominant for tau, nu, gamma >= 0, so the Thomas recursion runs
/// without pivoting. At nu = 0 the factorization degenerates to a stored
/// reciprocal of (1 + tau*gamma), i.e. a scalar division per entry.
class DiffusionSolver {
 public:
  DiffusionSolver(int n_xi, double h_xi, double tau, double nu, double gamma);

  void solve_inplace(std::span<double> rhs) const;

  int n_xi() const { return n_xi_; }
  double nu() const { return nu_; }
  double gamma() const { return gamma_; }
  double tau() const { return tau_; }

 private:
  int n_xi_;
  double tau_, nu_, gamma_;
  std::vector<double> lower_;      // subdiagonal l_i, i = 1..n-1
  std::vector<double> upper_norm_; // u_i / pivot_i after elimination
  std::vector<double> pivot_inv_;  // 1 / pivot_i
};

/// Which steps of a run keep a full field snapshot. Snapshots are taken at
/// every step n with n % every == 0, plus the final step.
struct SnapshotPolicy {
  long every = 1;
};

/// Output of a run: per-step L2 norms, their running supremum, and the
/// requested snapshots (time-ordered, immutable once recorded).
struct Trajectory {
  TimeGrid time;
  long snapshot_every = 1;
  std::vector<long> snapshot_steps;
  std::vector<Field> snapshots;
  std::vector<double> step_norms;  // ||v^n||_{L2}, n = 0..n_steps
  double sup_norm = 0.0;

  /// Snapshot recorded at step n, or nullptr.
  const Field* snapshot_at_step(long n) const;
};

/// One IMEX Euler step: treats -gamma + nu * d^2/dxi^2 implicitly and
/// F(v) + G explicitly,
///   ((1 + tau*gamma) I - tau*nu*D2) v+ = v + tau*(F(v) + G).
/// g_at_t may be nullptr for G == 0. Throws BlowupError when the explicit
/// right-hand side turns non-finite.
Field imex_step(const Field& v, const ModelSpec& model, const PeriodicKernelTable& ktab,
                const DiffusionSolver& dsolver, const Field* g_at_t, double tau);

/// The nu = 0 step, v+ = (v + tau*(F(v) + G)) / (1 + tau*gamma). Runs the
/// same code path as imex_step with a nu = 0 solver, so the two agree
/// bitwise.
Field singular_step(const Field& v, const ModelSpec& model, const PeriodicKernelTable& ktab,
                    const Field* g_at_t, double tau);

/// Bundles the per-run machinery (kernel table, factored solver) so callers
/// can advance a state field one step at a time.
class Stepper {
 public:
  Stepper(const ModelSpec& model, std::shared_ptr<const Grid> grid, double tau);

  Field step(const Field& v) const;

  const ModelSpec& model() const { return model_; }
  const std::shared_ptr<const Grid>& grid_ptr() const { return grid_; }
  double tau() const { return tau_; }

 private:
  ModelSpec model_;
  std::shared_ptr<const Grid> grid_;
  double tau_;
  PeriodicKernelTable ktab_;
  DiffusionSolver dsolver_;
};

/// Full run from an explicit initial field. Deterministic given the
/// configuration. Aborts with BlowupError (carrying the step index) when a
/// step produces non-finite values or the L2 norm exceeds 1e6.
Trajectory run_from(Field v0, const ModelSpec& model, const TimeGrid& tg,
                    const SnapshotPolicy& policy);

/// Full run from the model's localized initial condition.
Trajectory run(const ModelSpec& model, std::shared_ptr<const Grid> grid, const TimeGrid& tg,
               const SnapshotPolicy& policy);

}  // namespace dnf
