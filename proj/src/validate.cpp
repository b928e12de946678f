#include "dnf/validate.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>
#include <vector>

#include "dnf/experiments.hpp"
#include "dnf/grid.hpp"
#include "dnf/kernels.hpp"
#include "dnf/model.hpp"
#include "dnf/nonlocal.hpp"

namespace dnf {
namespace {

// engine-only uniform draw, identical across standard libraries
double uniform(std::mt19937_64& rng, double lo, double hi) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + u * (hi - lo);
}

Field random_field(const std::shared_ptr<const Grid>& grid, std::mt19937_64& rng, double lo,
                   double hi) {
  Field f(grid);
  for (double& v : f.data()) v = uniform(rng, lo, hi);
  return f;
}

ModelSpec reference_model() {
  ModelSpec m;
  m.gamma = 0.5;
  m.nu = 0.1;
  m.firing = {1e3, 0.1};
  m.kernel = {1.0, 0.5, 1.0};
  m.init = {5.0, 20.0, 0.5};
  return m;
}

GridSpec reference_grid(int n_x, int n_xi) { return {n_x, n_xi, 24.0 * M_PI, 3.0}; }

struct Reporter {
  std::ostream& out;
  bool all_ok = true;

  void check(const std::string& name, bool ok, const std::string& detail) {
    all_ok = all_ok && ok;
    out << (ok ? "PASS" : "FAIL") << "  " << name;
    if (!detail.empty()) out << "  (" << detail << ")";
    out << "\n";
  }
};

void check_f_oracle(Reporter& rep) {
  const ModelSpec model = reference_model();
  std::mt19937_64 rng(20240901);
  for (const auto& [n_x, n_xi] : {std::pair{64, 33}, std::pair{128, 65}}) {
    auto grid = make_grid(reference_grid(n_x, n_xi));
    const auto ktab = periodize_kernel(model.kernel.kappa, grid);
    double worst = 0.0;
    for (int trial = 0; trial < 3; ++trial) {
      const Field u = random_field(grid, rng, -5.0, 5.0);
      const Field fast = apply_F(u, model, ktab);
      const Field direct = apply_F_direct(u, model);
      worst = std::max(worst, std::sqrt(l2_distance_sq(fast, direct) / l2_norm_sq(direct)));
    }
    std::ostringstream detail;
    detail << n_x << "x" << n_xi << " rel err " << worst;
    rep.check("nonlocal operator: FFT path matches direct quadrature", worst <= 1e-10,
              detail.str());
  }
}

void check_lipschitz(Reporter& rep) {
  const ModelSpec model = reference_model();
  auto grid = make_grid(reference_grid(128, 65));
  const auto ktab = periodize_kernel(model.kernel.kappa, grid);
  const double kf = estimate_KF(model, *grid);

  std::mt19937_64 rng(20240902);
  double worst_bound = -std::numeric_limits<double>::infinity();
  for (int trial = 0; trial < 100; ++trial) {
    const Field u = random_field(grid, rng, -5.0, 5.0);
    worst_bound = std::max(worst_bound, l2_norm(apply_F(u, model, ktab)) - (kf + 1e-6));
  }
  std::ostringstream b_detail;
  b_detail << "margin " << -worst_bound;
  rep.check("a priori bound: ||F(u)|| <= K_F", worst_bound <= 0.0, b_detail.str());

  double worst_lip = -std::numeric_limits<double>::infinity();
  for (int trial = 0; trial < 100; ++trial) {
    const Field u = random_field(grid, rng, -5.0, 5.0);
    const Field v = random_field(grid, rng, -5.0, 5.0);
    const double lhs = std::sqrt(l2_distance_sq(apply_F(u, model, ktab), apply_F(v, model, ktab)));
    const double rhs = kf * std::sqrt(l2_distance_sq(u, v)) + 1e-6;
    worst_lip = std::max(worst_lip, lhs - rhs);
  }
  std::ostringstream l_detail;
  l_detail << "margin " << -worst_lip;
  rep.check("Lipschitz property: ||F(u)-F(v)|| <= K_F ||u-v||", worst_lip <= 0.0, l_detail.str());
}

void check_orders(Reporter& rep) {
  const OrderResult tr = order_check(RefinementAxis::time);
  std::ostringstream t_detail;
  t_detail << "observed " << tr.observed_order;
  rep.check("time stepping order 1.0 +/- 0.2",
            tr.monotone && std::abs(tr.observed_order - 1.0) <= 0.2, t_detail.str());

  const OrderResult sp = order_check(RefinementAxis::space);
  std::ostringstream s_detail;
  s_detail << "observed " << sp.observed_order;
  rep.check("xi discretization order 2.0 +/- 0.2",
            sp.monotone && std::abs(sp.observed_order - 2.0) <= 0.2, s_detail.str());
}

void check_kernel_equivalence(Reporter& rep) {
  const auto* simd = kernels::avx2_ops();
  if (!simd) {
    rep.check("kernel variants: no SIMD variant on this CPU, scalar only", true, "");
    return;
  }
  const auto& ref = kernels::scalar_ops();
  std::mt19937_64 rng(20240903);
  const std::size_t n = 1003;  // deliberately not a multiple of the lane width
  std::vector<double> u(n), w(n), a(n), b(n), y_ref(n), y_simd(n);
  for (std::size_t i = 0; i < n; ++i) {
    u[i] = uniform(rng, -6.0, 6.0);
    w[i] = uniform(rng, 0.0, 1.0);
    a[i] = uniform(rng, -1.0, 1.0);
    b[i] = uniform(rng, -1.0, 1.0);
  }

  ref.sigmoid(u.data(), y_ref.data(), n, 1e3, 0.1);
  simd->sigmoid(u.data(), y_simd.data(), n, 1e3, 0.1);
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) worst = std::max(worst, std::abs(y_ref[i] - y_simd[i]));
  std::ostringstream sig_detail;
  sig_detail << "max abs diff " << worst;
  rep.check("kernel variants: sigmoid scalar vs " + std::string(simd->name), worst <= 5e-15,
            sig_detail.str());

  const double s_ref = ref.weighted_sumsq(a.data(), w.data(), n);
  const double s_simd = simd->weighted_sumsq(a.data(), w.data(), n);
  const double rel = std::abs(s_ref - s_simd) / std::abs(s_ref);
  std::ostringstream red_detail;
  red_detail << "rel diff " << rel;
  rep.check("kernel variants: weighted reduction scalar vs " + std::string(simd->name),
            rel <= 1e-13, red_detail.str());

  ref.axpy2(a.data(), b.data(), u.data(), 0.05, y_ref.data(), n);
  simd->axpy2(a.data(), b.data(), u.data(), 0.05, y_simd.data(), n);
  worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) worst = std::max(worst, std::abs(y_ref[i] - y_simd[i]));
  std::ostringstream fus_detail;
  fus_detail << "max abs diff " << worst;
  rep.check("kernel variants: fused update scalar vs " + std::string(simd->name), worst <= 1e-15,
            fus_detail.str());
}

}  // namespace

bool run_validation_suite(std::ostream& out) {
  Reporter rep{out};
  out << "active kernels: " << kernels::active_ops().name << "\n";
  check_kernel_equivalence(rep);
  check_f_oracle(rep);
  check_lipschitz(rep);
  check_orders(rep);
  out << (rep.all_ok ? "validation passed" : "validation FAILED") << "\n";
  return rep.all_ok;
}

}  // namespace dnf
