#include "dnf/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "dnf/kernels.hpp"

namespace dnf {

void GridSpec::validate() const {
  std::string problems;
  if (n_x < 4) problems += "n_x must be >= 4; ";
  if (n_x % 2 != 0) problems += "n_x must be even; ";
  if (n_xi < 3) problems += "n_xi must be >= 3; ";
  if (!(L_x > 0.0)) problems += "L_x must be > 0; ";
  if (!(L_xi > 0.0)) problems += "L_xi must be > 0; ";
  if (!problems.empty()) {
    throw std::invalid_argument("invalid grid spec: " + problems);
  }
}

Grid build_grid(const GridSpec& spec) {
  spec.validate();
  Grid g;
  g.spec = spec;

  const double hx = spec.h_x();
  g.x_nodes.resize(spec.n_x);
  for (int i = 0; i < spec.n_x; ++i) {
    g.x_nodes[i] = -spec.L_x + i * hx;
  }

  const double hxi = spec.h_xi();
  g.xi_nodes.resize(spec.n_xi);
  g.xi_weights.resize(spec.n_xi);
  for (int j = 0; j < spec.n_xi; ++j) {
    g.xi_nodes[j] = -spec.L_xi + j * hxi;
    g.xi_weights[j] = hxi;
  }
  g.xi_weights.front() = 0.5 * hxi;
  g.xi_weights.back() = 0.5 * hxi;
  return g;
}

std::shared_ptr<const Grid> make_grid(const GridSpec& spec) {
  return std::make_shared<const Grid>(build_grid(spec));
}

Field::Field(std::shared_ptr<const Grid> grid, double fill)
    : grid_(std::move(grid)),
      values_(static_cast<std::size_t>(grid_->spec.n_x) * grid_->spec.n_xi, fill) {}

bool Field::all_finite() const {
  for (double v : values_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

bool Field::compatible_with(const Field& other) const {
  return grid_ && other.grid_ && grid_->spec == other.grid_->spec;
}

double l2_norm_sq(const Field& f) {
  const auto& ops = kernels::active_ops();
  const Grid& g = f.grid();
  double total = 0.0;
  for (int i = 0; i < f.nx(); ++i) {
    total += ops.weighted_sumsq(f.row(i).data(), g.xi_weights.data(), g.xi_weights.size());
  }
  return g.h_x() * total;
}

double l2_norm(const Field& f) { return std::sqrt(l2_norm_sq(f)); }

double l2_distance_sq(const Field& f, const Field& g) {
  if (!f.compatible_with(g)) {
    throw std::invalid_argument("l2_distance_sq: fields live on different grids");
  }
  const auto& ops = kernels::active_ops();
  const Grid& grid = f.grid();
  double total = 0.0;
  for (int i = 0; i < f.nx(); ++i) {
    total += ops.weighted_diffsq(f.row(i).data(), g.row(i).data(), grid.xi_weights.data(),
                                 grid.xi_weights.size());
  }
  return grid.h_x() * total;
}

}  // namespace dnf
