#include "dnf/model.hpp"

#include <cmath>
#include <stdexcept>

namespace dnf {
namespace {

// Composite Simpson on [a, b] with n panels (n even).
template <typename F>
double simpson(double a, double b, int n, F&& f) {
  const double h = (b - a) / n;
  double odd = 0.0, even = 0.0;
  for (int i = 1; i < n; i += 2) odd += f(a + i * h);
  for (int i = 2; i < n; i += 2) even += f(a + i * h);
  return h / 3.0 * (f(a) + 4.0 * odd + 2.0 * even + f(b));
}

}  // namespace

double delta_profile(double xi, double sigma) {
  if (!(sigma > 0.0)) {
    throw std::invalid_argument("delta_profile: sigma must be > 0");
  }
  const double z = xi / sigma;
  return std::exp(-z * z) / (sigma * std::sqrt(M_PI));
}

double firing_rate(double u, const FiringRateSpec& spec) {
  // exp overflowing to +inf saturates the quotient to 0, underflow to 1
  return 1.0 / (1.0 + std::exp(-spec.mu * (u - spec.theta)));
}

double firing_rate_deriv(double u, const FiringRateSpec& spec) {
  const double s = firing_rate(u, spec);
  return spec.mu * s * (1.0 - s);
}

double periodized_exp_kernel(double kappa, double circumference, double d) {
  // sum over images of (kappa/2) e^{-|d + m*c|} collapses to a two-term
  // geometric form on [0, c]
  const double c = circumference;
  return 0.5 * kappa * (std::exp(-d) + std::exp(-(c - d))) / (1.0 - std::exp(-c));
}

Field initial_condition(std::shared_ptr<const Grid> grid, const InitialConditionSpec& spec) {
  if (!(spec.sigma > 0.0)) {
    throw std::invalid_argument("initial_condition: sigma must be > 0");
  }
  const FiringRateSpec alpha_shape{spec.rho, spec.x0};
  Field v0(grid);
  const Grid& g = *v0.grid_ptr();
  for (int i = 0; i < v0.nx(); ++i) {
    const double alpha = 1.0 - firing_rate(std::abs(g.x_nodes[i]), alpha_shape);
    for (int j = 0; j < v0.nxi(); ++j) {
      v0(i, j) = alpha * delta_profile(g.xi_nodes[j], spec.sigma);
    }
  }
  return v0;
}

double estimate_KF(const ModelSpec& model, const Grid& grid) {
  const KernelSpec& k = model.kernel;
  if (!(k.sigma > 0.0)) {
    throw std::invalid_argument("estimate_KF: kernel sigma must be > 0");
  }
  const double Lx = grid.spec.L_x;
  const double Lxi = grid.spec.L_xi;
  const double circumference = 2.0 * Lx;

  // ∫∫_{TxT} w(x-x')^2 dx dx' = |T| * ∫_0^{|T|} w_per(d)^2 dd by translation
  // invariance; the integrand is smooth on the open period.
  const double x_factor =
      circumference * simpson(0.0, circumference, 1 << 16, [&](double d) {
        const double w = periodized_exp_kernel(k.kappa, circumference, d);
        return w * w;
      });

  const double xi_out = simpson(-Lxi, Lxi, 1 << 14, [&](double xi) {
    const double v = delta_profile(xi - k.xi0, k.sigma);
    return v * v;
  });
  const double xi_in = simpson(-Lxi, Lxi, 1 << 14, [&](double xi) {
    const double v = delta_profile(xi, k.sigma);
    return v * v;
  });

  const double w_norm = std::sqrt(x_factor * xi_out * xi_in);
  const double omega_sqrt = std::sqrt(4.0 * Lx * Lxi);
  const double sup_s = 1.0;
  const double sup_s_deriv = model.firing.mu / 4.0;
  return w_norm * std::max(omega_sqrt * sup_s, sup_s_deriv);
}

}  // namespace dnf
