#include <doctest.h>

#include <cmath>
#include <limits>
#include <thread>
#include <vector>

#include "dnf/grid.hpp"
#include "dnf/model.hpp"
#include "dnf/nonlocal.hpp"
#include "test_support.hpp"

using namespace dnf;

TEST_CASE("periodize_kernel") {
  SUBCASE("large-domain limit recovers the free-space peak") {
    auto grid = make_grid(test::fig2_grid(64, 5));
    const auto ktab = periodize_kernel(1.0, grid);
    CHECK(ktab.samples()[0] == doctest::Approx(0.5).epsilon(1e-14));
  }

  SUBCASE("torus symmetry of the samples") {
    auto grid = make_grid({64, 5, 5.0, 1.0});  // short domain, wrap-around matters
    const auto ktab = periodize_kernel(1.3, grid);
    const auto s = ktab.samples();
    for (int i = 1; i < 64; ++i) {
      CHECK(s[i] == doctest::Approx(s[64 - i]).epsilon(1e-14));
    }
  }

  SUBCASE("samples match the truncated image sum") {
    auto grid = make_grid(test::fig2_grid(128, 5));
    const auto ktab = periodize_kernel(1.0, grid);
    const double c = 2.0 * grid->spec.L_x;
    for (int i = 0; i < 128; ++i) {
      const double d = i * grid->h_x();
      double image_sum = 0.0;
      for (int m = -3; m <= 3; ++m) {
        image_sum += 0.5 * std::exp(-std::abs(d + m * c));
      }
      CHECK(std::abs(ktab.samples()[i] - image_sum) <= 1e-15);
    }
  }

  SUBCASE("one-period quadrature integrates to kappa up to the kink error") {
    const double kappa = 1.7;
    for (int n_x : {512, 1024}) {
      auto grid = make_grid(test::fig2_grid(n_x, 5));
      const auto ktab = periodize_kernel(kappa, grid);
      double sum = 0.0;
      for (double s : ktab.samples()) sum += s;
      const double h = grid->h_x();
      // leading Euler-Maclaurin error from the |x| kink is kappa*h^2/12
      CHECK(std::abs(sum * h - kappa) <= 0.2 * kappa * h * h);
    }
  }

  SUBCASE("nonnegative samples for positive coupling") {
    auto grid = make_grid({32, 5, 4.0, 1.0});
    const auto ktab = periodize_kernel(2.0, grid);
    for (double s : ktab.samples()) CHECK(s >= 0.0);
  }
}

TEST_CASE("apply_F") {
  const ModelSpec model = test::fig2_model();

  SUBCASE("zero coupling gives the zero field") {
    auto grid = make_grid(test::fig2_grid(64, 33));
    const auto ktab = periodize_kernel(0.0, grid);
    ModelSpec m = model;
    m.kernel.kappa = 0.0;
    std::mt19937_64 rng(3);
    const Field f = apply_F(test::random_field(grid, rng, -5.0, 5.0), m, ktab);
    for (double v : f.data()) CHECK(v == 0.0);
  }

  SUBCASE("saturated input reproduces the separable closed form") {
    // n_xi = 97 puts xi0 = 1 exactly on a node
    auto grid = make_grid(test::fig2_grid(256, 97));
    const auto ktab = periodize_kernel(model.kernel.kappa, grid);
    const Field u(grid, 1e6);  // S(u) == 1 everywhere
    const Field f = apply_F(u, model, ktab);

    double soma_mass = 0.0;  // trapezoid of delta_sigma, = erf(L_xi/sigma) to quadrature accuracy
    for (int j = 0; j < grid->spec.n_xi; ++j) {
      soma_mass += grid->xi_weights[j] * delta_profile(grid->xi_nodes[j], model.kernel.sigma);
    }
    CHECK(soma_mass == doctest::Approx(std::erf(3.0 / 0.5)).epsilon(1e-10));

    double kernel_mass = 0.0;  // one-period quadrature of the lateral kernel
    for (double s : ktab.samples()) kernel_mass += s;
    kernel_mass *= grid->h_x();

    const int j_xi0 = 64;  // xi node at xi0 = 1
    REQUIRE(grid->xi_nodes[j_xi0] == doctest::Approx(1.0).epsilon(1e-14));
    const double expected = soma_mass * kernel_mass * delta_profile(0.0, model.kernel.sigma);
    for (int i = 0; i < f.nx(); i += 17) {
      CHECK(f(i, j_xi0) == doctest::Approx(expected).epsilon(1e-12));
    }
  }

  SUBCASE("threshold input halves the saturated output") {
    auto grid = make_grid(test::fig2_grid(64, 33));
    const auto ktab = periodize_kernel(model.kernel.kappa, grid);
    const Field u_sat(grid, 1e6);
    const Field u_mid(grid, model.firing.theta);  // S == 0.5 exactly
    const Field f_sat = apply_F(u_sat, model, ktab);
    const Field f_mid = apply_F(u_mid, model, ktab);
    for (int i = 0; i < f_sat.nx(); ++i) {
      for (int j = 0; j < f_sat.nxi(); ++j) {
        CHECK(f_mid(i, j) == doctest::Approx(0.5 * f_sat(i, j)).epsilon(1e-14));
      }
    }
  }

  SUBCASE("grid mismatch and non-finite inputs are rejected") {
    auto grid = make_grid(test::fig2_grid(64, 33));
    auto other = make_grid(test::fig2_grid(64, 65));
    const auto ktab = periodize_kernel(model.kernel.kappa, grid);
    CHECK_THROWS_AS(apply_F(Field(other), model, ktab), std::invalid_argument);
    Field bad(grid);
    bad(1, 1) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(apply_F(bad, model, ktab), std::invalid_argument);
  }
}

TEST_CASE("apply_F_direct") {
  const ModelSpec model = test::fig2_model();

  SUBCASE("zero coupling gives the zero field") {
    auto grid = make_grid(test::fig2_grid(32, 9));
    ModelSpec m = model;
    m.kernel.kappa = 0.0;
    std::mt19937_64 rng(5);
    const Field f = apply_F_direct(test::random_field(grid, rng), m);
    for (double v : f.data()) CHECK(v == 0.0);
  }

  SUBCASE("refuses oversized grids") {
    auto grid = make_grid(test::fig2_grid(1024, 256));
    CHECK_THROWS_AS(apply_F_direct(Field(grid), model), std::invalid_argument);
  }

  SUBCASE("FFT path matches the direct quadrature on random fields") {
    auto grid = make_grid(test::fig2_grid(64, 33));
    const auto ktab = periodize_kernel(model.kernel.kappa, grid);
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 3; ++trial) {
      const Field u = test::random_field(grid, rng, -5.0, 5.0);
      const Field fast = apply_F(u, model, ktab);
      const Field direct = apply_F_direct(u, model);
      const double rel = std::sqrt(l2_distance_sq(fast, direct) / l2_norm_sq(direct));
      CHECK(rel <= 1e-10);
    }
  }

  SUBCASE("output has the rank-1 column structure") {
    auto grid = make_grid(test::fig2_grid(32, 17));
    std::mt19937_64 rng(23);
    const Field f = apply_F_direct(test::random_field(grid, rng, -5.0, 5.0), model);
    for (int i = 0; i < f.nx(); ++i) {
      double ratio0 = 0.0;
      bool have_ref = false;
      for (int j = 0; j < f.nxi(); ++j) {
        const double dj = delta_profile(grid->xi_nodes[j] - model.kernel.xi0, model.kernel.sigma);
        if (dj <= 1e-12) continue;
        const double ratio = f(i, j) / dj;
        if (!have_ref) {
          ratio0 = ratio;
          have_ref = true;
        } else {
          CHECK(ratio == doctest::Approx(ratio0).epsilon(1e-10));
        }
      }
      CHECK(have_ref);
    }
  }
}

TEST_CASE("a shared kernel table convolves safely from several threads") {
  auto grid = make_grid(test::fig2_grid(128, 5));
  const auto ktab = periodize_kernel(1.0, grid);
  const int n = grid->spec.n_x;

  // distinct inputs and their single-threaded reference outputs
  std::mt19937_64 rng(59);
  std::vector<std::vector<double>> inputs(8), expected(8);
  for (int k = 0; k < 8; ++k) {
    inputs[k].resize(n);
    for (double& v : inputs[k]) v = test::uniform(rng, -1.0, 1.0);
    expected[k].assign(n, 0.0);
    ktab.convolve(inputs[k], expected[k]);
  }

  std::vector<std::vector<double>> results(8, std::vector<double>(n, 0.0));
  std::vector<std::thread> pool;
  for (int t = 0; t < 4; ++t) {
    pool.emplace_back([&, t] {
      for (int rep = 0; rep < 50; ++rep) {
        for (int k = t; k < 8; k += 4) {
          ktab.convolve(inputs[k], results[k]);
        }
      }
    });
  }
  for (auto& th : pool) th.join();

  for (int k = 0; k < 8; ++k) {
    for (int i = 0; i < n; ++i) CHECK(results[k][i] == expected[k][i]);
  }
}

TEST_CASE("boundedness and Lipschitz property at unit scale") {
  const ModelSpec model = test::fig2_model();
  auto grid = make_grid(test::fig2_grid(64, 33));
  const auto ktab = periodize_kernel(model.kernel.kappa, grid);
  const double kf = estimate_KF(model, *grid);

  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const Field u = test::random_field(grid, rng, -5.0, 5.0);
    const Field v = test::random_field(grid, rng, -5.0, 5.0);
    CHECK(l2_norm(apply_F(u, model, ktab)) <= kf + 1e-6);
    const double lhs = std::sqrt(l2_distance_sq(apply_F(u, model, ktab), apply_F(v, model, ktab)));
    CHECK(lhs <= kf * std::sqrt(l2_distance_sq(u, v)) + 1e-6);
  }
}
