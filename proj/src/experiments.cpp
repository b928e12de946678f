#include "dnf/experiments.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <stdexcept>
#include <string>
#include <thread>

#include "dnf/errors.hpp"

namespace dnf {

FitResult linear_fit(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("linear_fit: length mismatch");
  if (x.size() < 2) throw std::invalid_argument("linear_fit: need at least 2 points");

  const double n = static_cast<double>(x.size());
  double xbar = 0.0, ybar = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    xbar += x[i];
    ybar += y[i];
  }
  xbar /= n;
  ybar /= n;

  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - xbar) * (x[i] - xbar);
    sxy += (x[i] - xbar) * (y[i] - ybar);
  }
  if (sxx == 0.0) throw std::invalid_argument("linear_fit: need at least 2 distinct abscissae");

  FitResult fit;
  fit.slope = sxy / sxx;
  fit.intercept = ybar - fit.slope * xbar;

  double ss_res = 0.0, ss_tot = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (fit.slope * x[i] + fit.intercept);
    ss_res += r * r;
    ss_tot += (y[i] - ybar) * (y[i] - ybar);
  }
  if (ss_tot == 0.0) {
    fit.r2 = 1.0;
    fit.degenerate = true;
  } else {
    fit.r2 = 1.0 - ss_res / ss_tot;
  }
  return fit;
}

namespace {

void validate_sweep(const SweepConfig& cfg) {
  if (cfg.nus.size() < 3) {
    throw std::invalid_argument("nu_sweep: need at least 3 nu values for a regression");
  }
  if (cfg.nus.front() != 0.0) {
    throw std::invalid_argument("nu_sweep: nus[0] must be 0 (the reference run)");
  }
  for (std::size_t k = 1; k < cfg.nus.size(); ++k) {
    if (!(cfg.nus[k] > cfg.nus[k - 1])) {
      throw std::invalid_argument("nu_sweep: nus must be strictly increasing");
    }
  }
  if (cfg.threads < 1) throw std::invalid_argument("nu_sweep: threads must be >= 1");
}

// Runs one diffusive trajectory in lockstep against the stored reference,
// returning max_n ||v^n - ref^n||^2 without keeping its own snapshots.
double streamed_distance(const ModelSpec& model, const std::shared_ptr<const Grid>& grid,
                         const TimeGrid& tg, const Trajectory& reference) {
  Stepper stepper(model, grid, tg.tau);
  Field v = initial_condition(grid, model.init);
  double worst = l2_distance_sq(v, reference.snapshots[0]);
  for (long n = 1; n <= tg.n_steps; ++n) {
    try {
      v = stepper.step(v);
    } catch (const BlowupError& e) {
      throw BlowupError(std::string(e.what()) + " at step " + std::to_string(n), n, tg.t(n));
    }
    const double nrm = l2_norm(v);
    if (!std::isfinite(nrm) || nrm > 1e6) {
      throw BlowupError("nu run exceeded the blow-up threshold at step " + std::to_string(n), n,
                        tg.t(n));
    }
    worst = std::max(worst, l2_distance_sq(v, reference.snapshots[n]));
  }
  return worst;
}

}  // namespace

SweepResult nu_sweep(const SweepConfig& cfg) {
  validate_sweep(cfg);
  auto grid = make_grid(cfg.grid);

  ModelSpec ref_model = cfg.model;
  ref_model.nu = 0.0;
  const Trajectory reference = run(ref_model, grid, cfg.time, SnapshotPolicy{1});

  SweepResult result;
  result.nus = cfg.nus;
  result.errors.assign(cfg.nus.size(), 0.0);  // e(0) = 0 exactly

  const std::size_t n_runs = cfg.nus.size() - 1;
  std::vector<std::exception_ptr> failures(n_runs);
  std::atomic<std::size_t> next{0};

  auto worker = [&]() {
    while (true) {
      const std::size_t r = next.fetch_add(1);
      if (r >= n_runs) return;
      const std::size_t k = r + 1;
      try {
        ModelSpec m = cfg.model;
        m.nu = cfg.nus[k];
        result.errors[k] = streamed_distance(m, grid, cfg.time, reference);
      } catch (const BlowupError& e) {
        failures[r] = std::make_exception_ptr(
            BlowupError(std::string(e.what()) + " (nu=" + std::to_string(cfg.nus[k]) + ")",
                        e.step, e.t));
      } catch (...) {
        failures[r] = std::current_exception();
      }
    }
  };

  const std::size_t n_workers = std::min<std::size_t>(cfg.threads, n_runs);
  if (n_workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    for (std::size_t w = 0; w < n_workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }

  // regression over the nu > 0 points; the (0, 0) pair is reported but not fitted
  std::span<const double> xs(result.nus.data() + 1, n_runs);
  std::span<const double> ys(result.errors.data() + 1, n_runs);
  result.fit = linear_fit(xs, ys);
  return result;
}

namespace {

ProfileSlices profile_run(const ModelSpec& model, const std::shared_ptr<const Grid>& grid,
                          const TimeGrid& tg, long n1, long n3) {
  const Trajectory traj = run(model, grid, tg, SnapshotPolicy{n1});
  const Field* f1 = traj.snapshot_at_step(n1);
  const Field* f3 = traj.snapshot_at_step(n3);
  if (!f1 || !f3) throw std::logic_error("profile_run: missing probe snapshot");

  ProfileSlices out;
  out.nu = model.nu;
  out.at_t1 = *f1;
  out.at_t3 = *f3;
  const int i0 = grid->spec.n_x / 2;  // x_nodes[n_x/2] == 0 exactly
  const auto r1 = f1->row(i0);
  const auto r3 = f3->row(i0);
  out.slice_t1.assign(r1.begin(), r1.end());
  out.slice_t3.assign(r3.begin(), r3.end());
  return out;
}

}  // namespace

ProfileResult profile_experiment(const ModelSpec& model, const GridSpec& grid_spec,
                                 const TimeGrid& time) {
  if (!(model.nu > 0.0)) {
    throw std::invalid_argument("profile_experiment: model nu must be > 0 for the diffusive run");
  }
  if (time.T < 3.0) {
    throw std::invalid_argument("profile_experiment: needs T >= 3 to probe t = 1 and t = 3");
  }
  const long n1 = std::lround(1.0 / time.tau);
  const long n3 = std::lround(3.0 / time.tau);
  if (std::abs(n1 * time.tau - 1.0) > 1e-12 || std::abs(n3 * time.tau - 3.0) > 1e-12) {
    throw std::invalid_argument("profile_experiment: tau must divide the probe times 1 and 3");
  }

  auto grid = make_grid(grid_spec);
  ModelSpec base = model;
  base.nu = 0.0;

  ProfileResult result;
  result.base = profile_run(base, grid, time, n1, n3);
  result.diffusive = profile_run(model, grid, time, n1, n3);
  return result;
}

std::vector<LocalMax> local_maxima(std::span<const double> values,
                                   std::span<const double> xi_nodes) {
  std::vector<LocalMax> maxima;
  for (std::size_t j = 1; j + 1 < values.size(); ++j) {
    if (values[j] > values[j - 1] && values[j] > values[j + 1]) {
      maxima.push_back({static_cast<int>(j), xi_nodes[j], values[j]});
    }
  }
  return maxima;
}

double half_height_width(std::span<const double> values, std::span<const double> xi_nodes) {
  std::size_t peak = 0;
  for (std::size_t j = 1; j < values.size(); ++j) {
    if (values[j] > values[peak]) peak = j;
  }
  const double half = 0.5 * values[peak];

  // walk outwards from the peak to the first crossings below half height
  double left = xi_nodes.front();
  for (std::size_t j = peak; j-- > 0;) {
    if (values[j] < half) {
      const double f = (half - values[j]) / (values[j + 1] - values[j]);
      left = xi_nodes[j] + f * (xi_nodes[j + 1] - xi_nodes[j]);
      break;
    }
  }
  double right = xi_nodes.back();
  for (std::size_t j = peak + 1; j < values.size(); ++j) {
    if (values[j] < half) {
      const double f = (values[j - 1] - half) / (values[j - 1] - values[j]);
      right = xi_nodes[j - 1] + f * (xi_nodes[j] - xi_nodes[j - 1]);
      break;
    }
  }
  return right - left;
}

namespace {

// Frozen-data linear problem (kappa = 0 turns the nonlocal term off): a few
// exact basis modes with mild x-modulation, so the closed form is available
// through the modal oracle.
struct LinearProblem {
  Field v0;
  std::shared_ptr<const Field> forcing;  // may be null
  ModelSpec model;
};

LinearProblem make_linear_problem(const OrderCheckConfig& cfg, int n_xi) {
  GridSpec gs{cfg.n_x, n_xi, cfg.L_x, cfg.L_xi};
  auto grid = make_grid(gs);
  const CosineBasis basis{cfg.L_xi, std::min(8, n_xi - 1)};

  LinearProblem p{Field(grid), nullptr, {}};
  p.model.gamma = cfg.constant_data ? 0.0 : cfg.gamma;
  p.model.nu = cfg.nu;
  p.model.kernel = {0.0, 1.0, 0.0};
  p.model.firing = {1.0, 0.0};
  p.model.init = {1.0, 1.0, 1.0};  // unused; runs start from explicit fields

  if (cfg.constant_data) {
    for (double& v : p.v0.data()) v = 1.0;
    return p;
  }

  Field n_field(grid);
  for (int i = 0; i < gs.n_x; ++i) {
    const double x = grid->x_nodes[i];
    const double mx = 1.0 + 0.25 * std::cos(M_PI * x / cfg.L_x);
    const double nx = 1.0 - 0.5 * std::sin(M_PI * x / cfg.L_x);
    for (int j = 0; j < gs.n_xi; ++j) {
      const double xi = grid->xi_nodes[j];
      p.v0(i, j) = mx * (0.4 * basis.psi(0, xi) + 1.0 * basis.psi(2, xi));
      n_field(i, j) = nx * (0.3 * basis.psi(1, xi) + 0.2 * basis.psi(3, xi));
    }
  }
  p.forcing = std::make_shared<const Field>(std::move(n_field));
  p.model.input = p.forcing;
  return p;
}

double linear_run_error(const LinearProblem& p, double tau, double T) {
  const TimeGrid tg = TimeGrid::make(tau, T);
  const Trajectory traj = run_from(p.v0, p.model, tg, SnapshotPolicy{std::max(tg.n_steps, 1L)});
  const Field& v_end = traj.snapshots.back();

  const CosineBasis basis{p.v0.grid().spec.L_xi, std::min(8, p.v0.nxi() - 1)};
  const Field exact =
      linear_exact_regular(p.v0, p.forcing.get(), T, p.model.nu, p.model.gamma, basis);
  return std::sqrt(l2_distance_sq(v_end, exact));
}

}  // namespace

OrderResult order_check(RefinementAxis axis, const OrderCheckConfig& cfg) {
  OrderResult result;

  if (axis == RefinementAxis::time) {
    const LinearProblem p = make_linear_problem(cfg, cfg.time_n_xi);
    for (double tau : cfg.taus) {
      result.h.push_back(tau);
      result.errors.push_back(linear_run_error(p, tau, cfg.T));
    }
  } else {
    for (int n_xi : cfg.n_xis) {
      const LinearProblem p = make_linear_problem(cfg, n_xi);
      result.h.push_back(p.v0.grid().h_xi());
      result.errors.push_back(linear_run_error(p, cfg.space_tau, cfg.T));
    }
  }

  double scale = 0.0;
  for (double e : result.errors) scale = std::max(scale, e);
  if (scale < 1e-12) {
    result.at_machine_precision = true;
    return result;
  }

  // errors must shrink with h; flag non-monotone sequences instead of fitting noise
  for (std::size_t i = 1; i < result.errors.size(); ++i) {
    const bool h_decreasing = result.h[i] < result.h[i - 1];
    const bool e_decreasing = result.errors[i] < result.errors[i - 1];
    if (h_decreasing != e_decreasing) result.monotone = false;
  }

  std::vector<double> log_h, log_e;
  for (std::size_t i = 0; i < result.h.size(); ++i) {
    log_h.push_back(std::log(result.h[i]));
    log_e.push_back(std::log(result.errors[i]));
  }
  result.observed_order = linear_fit(log_h, log_e).slope;
  return result;
}

}  // namespace dnf
