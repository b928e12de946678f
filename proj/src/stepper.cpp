#include "dnf/stepper.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "dnf/errors.hpp"
#include "dnf/kernels.hpp"

namespace dnf {

TimeGrid TimeGrid::make(double tau, double T) {
  if (!(tau > 0.0)) throw std::invalid_argument("TimeGrid: tau must be > 0");
  if (!(T >= 0.0)) throw std::invalid_argument("TimeGrid: T must be >= 0");
  const long n = std::lround(T / tau);
  if (std::abs(n * tau - T) > 1e-12 * std::max(1.0, std::abs(T))) {
    throw std::invalid_argument("TimeGrid: T must be an integer multiple of tau");
  }
  return TimeGrid{tau, T, n};
}

DiffusionSolver::DiffusionSolver(int n_xi, double h_xi, double tau, double nu, double gamma)
    : n_xi_(n_xi), tau_(tau), nu_(nu), gamma_(gamma) {
  if (n_xi < 3) throw std::invalid_argument("DiffusionSolver: n_xi must be >= 3");
  if (!(h_xi > 0.0)) throw std::invalid_argument("DiffusionSolver: h_xi must be > 0");
  if (tau < 0.0 || nu < 0.0 || gamma < 0.0) {
    throw std::invalid_argument("DiffusionSolver: tau, nu, gamma must be >= 0");
  }

  const double k = tau * nu / (h_xi * h_xi);
  const double diag = 1.0 + tau * gamma + 2.0 * k;

  lower_.assign(n_xi, 0.0);
  std::vector<double> upper(n_xi, 0.0);
  upper[0] = -2.0 * k;  // mirrored ghost at the left boundary
  for (int i = 1; i + 1 < n_xi; ++i) {
    lower_[i] = -k;
    upper[i] = -k;
  }
  lower_[n_xi - 1] = -2.0 * k;  // mirrored ghost at the right boundary

  upper_norm_.resize(n_xi);
  pivot_inv_.resize(n_xi);
  double pivot = diag;
  pivot_inv_[0] = 1.0 / pivot;
  upper_norm_[0] = upper[0] * pivot_inv_[0];
  for (int i = 1; i < n_xi; ++i) {
    pivot = diag - lower_[i] * upper_norm_[i - 1];
    pivot_inv_[i] = 1.0 / pivot;
    upper_norm_[i] = upper[i] * pivot_inv_[i];
  }
}

void DiffusionSolver::solve_inplace(std::span<double> rhs) const {
  if (rhs.size() != static_cast<std::size_t>(n_xi_)) {
    throw std::invalid_argument("DiffusionSolver: rhs length mismatch");
  }
  rhs[0] = rhs[0] * pivot_inv_[0];
  for (int i = 1; i < n_xi_; ++i) {
    rhs[i] = (rhs[i] - lower_[i] * rhs[i - 1]) * pivot_inv_[i];
  }
  for (int i = n_xi_ - 2; i >= 0; --i) {
    rhs[i] -= upper_norm_[i] * rhs[i + 1];
  }
}

const Field* Trajectory::snapshot_at_step(long n) const {
  for (std::size_t k = 0; k < snapshot_steps.size(); ++k) {
    if (snapshot_steps[k] == n) return &snapshots[k];
  }
  return nullptr;
}

Field imex_step(const Field& v, const ModelSpec& model, const PeriodicKernelTable& ktab,
                const DiffusionSolver& dsolver, const Field* g_at_t, double tau) {
  const Field f = apply_F(v, model, ktab);
  const auto& ops = kernels::active_ops();

  Field next(v.grid_ptr());
  for (int i = 0; i < v.nx(); ++i) {
    if (g_at_t) {
      ops.axpy2(v.row(i).data(), f.row(i).data(), g_at_t->row(i).data(), tau,
                next.row(i).data(), next.row(i).size());
    } else {
      ops.axpy(v.row(i).data(), f.row(i).data(), tau, next.row(i).data(), next.row(i).size());
    }
  }
  if (!next.all_finite()) {
    throw BlowupError("imex_step: non-finite explicit right-hand side", -1,
                      std::numeric_limits<double>::quiet_NaN());
  }
  for (int i = 0; i < next.nx(); ++i) {
    dsolver.solve_inplace(next.row(i));
  }
  return next;
}

Field singular_step(const Field& v, const ModelSpec& model, const PeriodicKernelTable& ktab,
                    const Field* g_at_t, double tau) {
  const DiffusionSolver dsolver(v.nxi(), v.grid().h_xi(), tau, 0.0, model.gamma);
  return imex_step(v, model, ktab, dsolver, g_at_t, tau);
}

Stepper::Stepper(const ModelSpec& model, std::shared_ptr<const Grid> grid, double tau)
    : model_(model),
      grid_(std::move(grid)),
      tau_(tau),
      ktab_(periodize_kernel(model.kernel.kappa, grid_)),
      dsolver_(grid_->spec.n_xi, grid_->h_xi(), tau, model.nu, model.gamma) {
  if (model_.input && (!model_.input->grid_ptr() || model_.input->grid().spec != grid_->spec)) {
    throw std::invalid_argument("Stepper: external input lives on a different grid");
  }
}

Field Stepper::step(const Field& v) const {
  return imex_step(v, model_, ktab_, dsolver_, model_.input.get(), tau_);
}

Trajectory run_from(Field v0, const ModelSpec& model, const TimeGrid& tg,
                    const SnapshotPolicy& policy) {
  if (policy.every < 1) throw std::invalid_argument("run: snapshot interval must be >= 1");
  Stepper stepper(model, v0.grid_ptr(), tg.tau);

  Trajectory traj;
  traj.time = tg;
  traj.snapshot_every = policy.every;
  traj.step_norms.reserve(tg.n_steps + 1);

  auto record = [&](long n, const Field& v) {
    if (n % policy.every == 0 || n == tg.n_steps) {
      traj.snapshot_steps.push_back(n);
      traj.snapshots.push_back(v);
    }
  };

  double nrm = l2_norm(v0);
  traj.step_norms.push_back(nrm);
  traj.sup_norm = nrm;
  record(0, v0);

  Field v = std::move(v0);
  for (long n = 1; n <= tg.n_steps; ++n) {
    try {
      v = stepper.step(v);
    } catch (const BlowupError& e) {
      throw BlowupError(std::string(e.what()) + " at step " + std::to_string(n), n, tg.t(n));
    }
    nrm = l2_norm(v);
    if (!std::isfinite(nrm) || nrm > 1e6) {
      throw BlowupError("run: solution norm " + std::to_string(nrm) + " exceeds the blow-up "
                        "threshold at step " + std::to_string(n), n, tg.t(n));
    }
    traj.step_norms.push_back(nrm);
    traj.sup_norm = std::max(traj.sup_norm, nrm);
    record(n, v);
  }
  return traj;
}

Trajectory run(const ModelSpec& model, std::shared_ptr<const Grid> grid, const TimeGrid& tg,
               const SnapshotPolicy& policy) {
  return run_from(initial_condition(std::move(grid), model.init), model, tg, policy);
}

}  // namespace dnf
