#pragma once

#include <cmath>
#include <random>

#include "dnf/grid.hpp"
#include "dnf/model.hpp"

namespace dnf::test {

// engine-only uniform draw so expected values do not depend on the standard
// library's distribution implementation
inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + u * (hi - lo);
}

inline Field random_field(const std::shared_ptr<const Grid>& grid, std::mt19937_64& rng,
                          double lo = -1.0, double hi = 1.0) {
  Field f(grid);
  for (double& v : f.data()) v = uniform(rng, lo, hi);
  return f;
}

// reference parameter set used throughout the experiments
inline ModelSpec fig2_model() {
  ModelSpec m;
  m.gamma = 0.5;
  m.nu = 0.1;
  m.firing = {1e3, 0.1};
  m.kernel = {1.0, 0.5, 1.0};
  m.init = {5.0, 20.0, 0.5};
  return m;
}

inline GridSpec fig2_grid(int n_x, int n_xi) { return {n_x, n_xi, 24.0 * M_PI, 3.0}; }

}  // namespace dnf::test
