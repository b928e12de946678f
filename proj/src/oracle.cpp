#include "dnf/oracle.hpp"

#include <cmath>
#include <stdexcept>

namespace dnf {

double CosineBasis::psi(int k, double xi) const {
  const double L = length();
  if (k == 0) return std::sqrt(1.0 / L);
  return std::sqrt(2.0 / L) * std::cos(k * M_PI * (xi + L_xi) / L);
}

double CosineBasis::mu_k(int k, double nu) const {
  const double w = k * M_PI / length();
  return nu * w * w;
}

ModalCoefficients project(const Field& field, const CosineBasis& basis) {
  const Grid& g = field.grid();
  if (basis.k_max > g.spec.n_xi - 1) {
    throw std::invalid_argument("project: k_max exceeds n_xi - 1");
  }
  const int n_modes = basis.k_max + 1;

  // basis samples with trapezoid weights folded in
  std::vector<double> wpsi(static_cast<std::size_t>(n_modes) * g.spec.n_xi);
  for (int k = 0; k < n_modes; ++k) {
    for (int j = 0; j < g.spec.n_xi; ++j) {
      wpsi[static_cast<std::size_t>(k) * g.spec.n_xi + j] =
          g.xi_weights[j] * basis.psi(k, g.xi_nodes[j]);
    }
  }

  ModalCoefficients out;
  out.n_x = g.spec.n_x;
  out.k_max = basis.k_max;
  out.c.assign(static_cast<std::size_t>(out.n_x) * n_modes, 0.0);
  for (int i = 0; i < out.n_x; ++i) {
    const auto row = field.row(i);
    for (int k = 0; k < n_modes; ++k) {
      const double* w = wpsi.data() + static_cast<std::size_t>(k) * g.spec.n_xi;
      double acc = 0.0;
      for (int j = 0; j < g.spec.n_xi; ++j) acc += w[j] * row[j];
      out.at(i, k) = acc;
    }
  }
  return out;
}

Field synthesize(const ModalCoefficients& coeffs, const CosineBasis& basis,
                 std::shared_ptr<const Grid> grid) {
  const Grid& g = *grid;
  if (coeffs.n_x != g.spec.n_x) {
    throw std::invalid_argument("synthesize: coefficient row count does not match the grid");
  }
  const int n_modes = coeffs.k_max + 1;
  std::vector<double> psi(static_cast<std::size_t>(n_modes) * g.spec.n_xi);
  for (int k = 0; k < n_modes; ++k) {
    for (int j = 0; j < g.spec.n_xi; ++j) {
      psi[static_cast<std::size_t>(k) * g.spec.n_xi + j] = basis.psi(k, g.xi_nodes[j]);
    }
  }

  Field f(std::move(grid));
  for (int i = 0; i < f.nx(); ++i) {
    auto row = f.row(i);
    for (int k = 0; k < n_modes; ++k) {
      const double c = coeffs.at(i, k);
      const double* p = psi.data() + static_cast<std::size_t>(k) * g.spec.n_xi;
      for (int j = 0; j < g.spec.n_xi; ++j) row[j] += c * p[j];
    }
  }
  return f;
}

Field linear_exact_regular(const Field& v0, const Field* n0, double t, double nu, double gamma,
                           const CosineBasis& basis) {
  if (n0 && !v0.compatible_with(*n0)) {
    throw std::invalid_argument("linear_exact_regular: v0 and N grids differ");
  }
  ModalCoefficients cv = project(v0, basis);
  ModalCoefficients cn;
  if (n0) cn = project(*n0, basis);

  ModalCoefficients out = cv;
  for (int k = 0; k <= basis.k_max; ++k) {
    const double lam = basis.lambda(k, nu, gamma);
    const double decay = std::exp(lam * t);
    // (1 - e^{lam t}) / (-lam) = expm1(lam t) / lam stays stable for small
    // |lam t|; lam == 0 is the removable limit with value t
    const double duhamel = (lam == 0.0) ? t : std::expm1(lam * t) / lam;
    for (int i = 0; i < out.n_x; ++i) {
      out.at(i, k) = cv.at(i, k) * decay + (n0 ? cn.at(i, k) * duhamel : 0.0);
    }
  }
  return synthesize(out, basis, v0.grid_ptr());
}

Field linear_exact_singular(const Field& v0, const Field* n0, double t, double gamma) {
  if (n0 && !v0.compatible_with(*n0)) {
    throw std::invalid_argument("linear_exact_singular: v0 and N grids differ");
  }
  const double decay = std::exp(-gamma * t);
  // (1 - e^{-gamma t}) / gamma
  const double duhamel = (gamma == 0.0) ? t : -std::expm1(-gamma * t) / gamma;
  Field out(v0.grid_ptr());
  const auto v0d = v0.data();
  auto outd = out.data();
  for (std::size_t n = 0; n < outd.size(); ++n) {
    outd[n] = v0d[n] * decay + (n0 ? n0->data()[n] * duhamel : 0.0);
  }
  return out;
}

double rate_probe(const Trajectory& a, const Trajectory& b) {
  if (a.time != b.time) {
    throw std::invalid_argument("rate_probe: trajectories use different time grids");
  }
  if (a.snapshot_every != 1 || b.snapshot_every != 1 ||
      a.snapshot_steps.size() != static_cast<std::size_t>(a.time.n_steps) + 1 ||
      b.snapshot_steps.size() != a.snapshot_steps.size()) {
    throw std::invalid_argument("rate_probe: both trajectories need a snapshot at every step");
  }
  double worst = 0.0;
  for (std::size_t n = 0; n < a.snapshots.size(); ++n) {
    worst = std::max(worst, l2_distance_sq(a.snapshots[n], b.snapshots[n]));
  }
  return worst;
}

}  // namespace dnf
