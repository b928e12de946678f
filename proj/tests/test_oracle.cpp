#include <doctest.h>

#include <cmath>
#include <vector>

#include "dnf/oracle.hpp"
#include "dnf/stepper.hpp"
#include "test_support.hpp"

using namespace dnf;

namespace {

Field sampled_mode(const std::shared_ptr<const Grid>& grid, const CosineBasis& basis, int k,
                   double amplitude = 1.0) {
  Field f(grid);
  for (int i = 0; i < f.nx(); ++i) {
    for (int j = 0; j < f.nxi(); ++j) {
      f(i, j) = amplitude * basis.psi(k, grid->xi_nodes[j]);
    }
  }
  return f;
}

Field gaussian_field(const std::shared_ptr<const Grid>& grid, double center, double spread) {
  Field f(grid);
  for (int i = 0; i < f.nx(); ++i) {
    for (int j = 0; j < f.nxi(); ++j) {
      const double z = (grid->xi_nodes[j] - center) / spread;
      f(i, j) = std::exp(-z * z);
    }
  }
  return f;
}

}  // namespace

TEST_CASE("CosineBasis eigenstructure") {
  const CosineBasis basis{3.0, 16};
  CHECK(basis.lambda(0, 0.1, 0.5) == -0.5);
  CHECK(basis.lambda(2, 0.1, 0.5) ==
        doctest::Approx(-0.5 - 0.1 * std::pow(2.0 * M_PI / 6.0, 2)).epsilon(1e-14));

  SUBCASE("eigenvalues collapse to -gamma at nu = 0") {
    for (int k = 0; k <= 16; ++k) CHECK(basis.lambda(k, 0.0, 0.5) == -0.5);
  }

  SUBCASE("strictly decreasing in k for positive diffusivity") {
    for (int k = 1; k <= 16; ++k) {
      CHECK(basis.lambda(k, 0.1, 0.5) < basis.lambda(k - 1, 0.1, 0.5));
    }
  }

  SUBCASE("discrete orthonormality under trapezoid quadrature") {
    for (int n_xi : {129, 257}) {
      const Grid g = build_grid({4, n_xi, 1.0, 3.0});
      double worst = 0.0;
      for (int a = 0; a <= 16; ++a) {
        for (int b = 0; b <= 16; ++b) {
          double ip = 0.0;
          for (int j = 0; j < n_xi; ++j) {
            ip += g.xi_weights[j] * basis.psi(a, g.xi_nodes[j]) * basis.psi(b, g.xi_nodes[j]);
          }
          worst = std::max(worst, std::abs(ip - (a == b ? 1.0 : 0.0)));
        }
      }
      CHECK(worst <= 1e-12);  // comfortably below the O(h_xi^2) requirement
    }
  }
}

TEST_CASE("project") {
  auto grid = make_grid({8, 257, 2.0, 3.0});
  const CosineBasis basis{3.0, 16};

  SUBCASE("a sampled basis mode projects onto its own coefficient") {
    const ModalCoefficients c = project(sampled_mode(grid, basis, 1), basis);
    for (int i = 0; i < c.n_x; ++i) {
      for (int k = 0; k <= basis.k_max; ++k) {
        CHECK(c.at(i, k) == doctest::Approx(k == 1 ? 1.0 : 0.0).epsilon(1e-12));
      }
    }
  }

  SUBCASE("a constant field lives in mode zero with coefficient c*sqrt(L)") {
    const Field f(grid, 0.7);
    const ModalCoefficients c = project(f, basis);
    for (int i = 0; i < c.n_x; ++i) {
      CHECK(c.at(i, 0) == doctest::Approx(0.7 * std::sqrt(6.0)).epsilon(1e-12));
      for (int k = 1; k <= basis.k_max; ++k) {
        CHECK(std::abs(c.at(i, k)) <= 1e-12);
      }
    }
  }

  SUBCASE("k_max beyond the grid resolution is rejected") {
    CHECK_THROWS_AS(project(Field(grid), CosineBasis{3.0, 257}), std::invalid_argument);
  }

  SUBCASE("Parseval defect shrinks under refinement for a kinked profile") {
    // |xi - 0.3| has slowly decaying coefficients, so both truncation and
    // quadrature contributions stay visible
    auto defect_at = [](int n_xi) {
      auto g = make_grid({4, n_xi, 1.0, 3.0});
      Field f(g);
      for (int i = 0; i < f.nx(); ++i) {
        for (int j = 0; j < f.nxi(); ++j) f(i, j) = std::abs(g->xi_nodes[j] - 0.3);
      }
      const CosineBasis full{3.0, n_xi - 1};
      const ModalCoefficients c = project(f, full);
      double sum = 0.0;
      for (int k = 0; k <= full.k_max; ++k) sum += c.at(0, k) * c.at(0, k);
      // exact continuum norm of the slice: int (xi-0.3)^2 over (-3,3)
      const double exact = (std::pow(3.0 - 0.3, 3) + std::pow(3.0 + 0.3, 3)) / 3.0;
      return std::abs(sum - exact);
    };
    const double d1 = defect_at(256);
    const double d2 = defect_at(512);
    CHECK(d1 <= 1e-3);
    CHECK(d2 < d1);
  }

  SUBCASE("project-then-synthesize reproduces smooth fields") {
    auto g = make_grid({4, 256, 1.0, 3.0});
    const Field f = gaussian_field(g, 0.5, 0.5);
    const CosineBasis full{3.0, 255};
    const Field back = synthesize(project(f, full), full, g);
    double worst = 0.0;
    for (int i = 0; i < f.nx(); ++i) {
      for (int j = 0; j < f.nxi(); ++j) worst = std::max(worst, std::abs(f(i, j) - back(i, j)));
    }
    CHECK(worst <= 1e-6);
  }
}

TEST_CASE("linear_exact_regular") {
  auto grid = make_grid({8, 257, 2.0, 3.0});
  const CosineBasis basis{3.0, 16};

  SUBCASE("mode-zero data decays exactly as exp(-gamma t)") {
    const Field v0 = sampled_mode(grid, basis, 0, 2.0);
    const Field v = linear_exact_regular(v0, nullptr, 1.3, 0.1, 0.5, basis);
    for (int i = 0; i < v.nx(); ++i) {
      for (int j = 0; j < v.nxi(); ++j) {
        CHECK(v(i, j) == doctest::Approx(v0(i, j) * std::exp(-0.5 * 1.3)).epsilon(1e-11));
      }
    }
  }

  SUBCASE("identity at t = 0 up to projection truncation") {
    auto g = make_grid({4, 256, 1.0, 3.0});
    const Field v0 = gaussian_field(g, 0.2, 0.6);
    const CosineBasis full{3.0, 255};
    const Field v = linear_exact_regular(v0, nullptr, 0.0, 0.1, 0.5, full);
    for (int i = 0; i < v.nx(); ++i) {
      for (int j = 0; j < v.nxi(); ++j) CHECK(v(i, j) == doctest::Approx(v0(i, j)).epsilon(1e-9));
    }
  }

  SUBCASE("single-mode amplitude decays with lambda_2") {
    const Field v0 = sampled_mode(grid, basis, 2);
    const Field v = linear_exact_regular(v0, nullptr, 1.0, 0.1, 0.5, basis);
    const double lambda2 = -(0.5 + 0.1 * std::pow(2.0 * M_PI / 6.0, 2));
    for (int j = 0; j < v.nxi(); ++j) {
      CHECK(v(0, j) == doctest::Approx(v0(0, j) * std::exp(lambda2)).epsilon(1e-11));
    }
  }

  SUBCASE("IMEX run converges to the closed form at first order in tau") {
    auto g = make_grid({4, 129, 1.0, 3.0});
    const CosineBasis b{3.0, 8};
    const Field v0 = sampled_mode(g, b, 2);
    ModelSpec m;
    m.gamma = 0.5;
    m.nu = 0.1;
    m.kernel = {0.0, 1.0, 0.0};
    m.firing = {1.0, 0.0};
    m.init = {1.0, 1.0, 1.0};
    const Field exact = linear_exact_regular(v0, nullptr, 1.0, m.nu, m.gamma, b);

    auto error_at = [&](double tau) {
      const TimeGrid tg = TimeGrid::make(tau, 1.0);
      const Trajectory traj = run_from(v0, m, tg, SnapshotPolicy{tg.n_steps});
      return std::sqrt(l2_distance_sq(traj.snapshots.back(), exact));
    };
    const double e1 = error_at(4e-3);
    const double e2 = error_at(2e-3);
    CHECK(e1 / e2 == doctest::Approx(2.0).epsilon(0.15));
  }

  SUBCASE("removable limit gamma = nu = 0 integrates the source linearly") {
    const Field v0 = sampled_mode(grid, basis, 0, 1.0);
    const Field n0 = sampled_mode(grid, basis, 0, 0.25);
    const Field v = linear_exact_regular(v0, &n0, 2.0, 0.0, 0.0, basis);
    for (int j = 0; j < v.nxi(); ++j) {
      CHECK(v(0, j) == doctest::Approx(v0(0, j) + 2.0 * n0(0, j)).epsilon(1e-12));
    }
  }
}

TEST_CASE("linear_exact_singular") {
  auto grid = make_grid({8, 33, 2.0, 3.0});

  SUBCASE("pure exponential decay without a source") {
    std::mt19937_64 rng(3);
    const Field v0 = test::random_field(grid, rng);
    const Field v = linear_exact_singular(v0, nullptr, 0.8, 0.5);
    for (int i = 0; i < v.nx(); ++i) {
      for (int j = 0; j < v.nxi(); ++j) {
        CHECK(v(i, j) == doctest::Approx(v0(i, j) * std::exp(-0.4)).epsilon(1e-13));
      }
    }
  }

  SUBCASE("saturation toward N / gamma") {
    const double gamma = 0.5;
    const Field v0(grid, 0.0);
    const Field n0(grid, gamma);  // N == gamma saturates at 1
    for (double t : {0.5, 2.0, 10.0}) {
      const Field v = linear_exact_singular(v0, &n0, t, gamma);
      for (double x : v.data()) {
        CHECK(x == doctest::Approx(1.0 - std::exp(-gamma * t)).epsilon(1e-13));
      }
    }
  }

  SUBCASE("gamma = 0 removable limit") {
    const Field v0(grid, 0.3);
    const Field n0(grid, 0.2);
    const Field v = linear_exact_singular(v0, &n0, 3.0, 0.0);
    for (double x : v.data()) CHECK(x == doctest::Approx(0.9).epsilon(1e-13));
  }

  SUBCASE("agrees with the regular oracle at nu = 0") {
    auto g = make_grid({4, 256, 1.0, 3.0});
    const Field v0 = gaussian_field(g, 0.0, 0.5);
    const Field n0 = gaussian_field(g, 0.8, 0.7);
    const CosineBasis full{3.0, 255};
    const Field a = linear_exact_regular(v0, &n0, 1.2, 0.0, 0.5, full);
    const Field b = linear_exact_singular(v0, &n0, 1.2, 0.5);
    double worst = 0.0;
    for (int i = 0; i < a.nx(); ++i) {
      for (int j = 0; j < a.nxi(); ++j) worst = std::max(worst, std::abs(a(i, j) - b(i, j)));
    }
    CHECK(worst <= 1e-6);
  }
}

TEST_CASE("rate_probe") {
  auto grid = make_grid({16, 9, 2.0, 1.0});
  const TimeGrid tg = TimeGrid::make(0.5, 0.5);

  auto manual_trajectory = [&](double offset_at_step1) {
    Trajectory t;
    t.time = tg;
    t.snapshot_every = 1;
    t.snapshot_steps = {0, 1};
    t.snapshots = {Field(grid, 1.0), Field(grid, 1.0 + offset_at_step1)};
    t.step_norms = {l2_norm(t.snapshots[0]), l2_norm(t.snapshots[1])};
    return t;
  };

  SUBCASE("identical trajectories probe to zero") {
    const Trajectory a = manual_trajectory(0.0);
    CHECK(rate_probe(a, a) == 0.0);
  }

  SUBCASE("a constant offset at one snapshot probes to c^2 |Omega|") {
    const Trajectory a = manual_trajectory(0.0);
    const Trajectory b = manual_trajectory(0.25);
    CHECK(rate_probe(a, b) == doctest::Approx(0.25 * 0.25 * 4.0 * 2.0 * 1.0).epsilon(1e-13));
  }

  SUBCASE("mismatched trajectories are rejected") {
    const Trajectory a = manual_trajectory(0.0);
    Trajectory b = manual_trajectory(0.0);
    b.time = TimeGrid::make(0.25, 0.5);
    CHECK_THROWS_AS(rate_probe(a, b), std::invalid_argument);
  }

  SUBCASE("probe values grow with the diffusivity gap") {
    ModelSpec m = test::fig2_model();
    auto g = make_grid(test::fig2_grid(128, 65));
    const TimeGrid t = TimeGrid::make(0.05, 1.0);
    m.nu = 0.0;
    const Trajectory ref = run(m, g, t, SnapshotPolicy{1});
    m.nu = 0.05;
    const double e_mid = rate_probe(ref, run(m, g, t, SnapshotPolicy{1}));
    m.nu = 0.1;
    const double e_top = rate_probe(ref, run(m, g, t, SnapshotPolicy{1}));
    CHECK(e_mid > 0.0);
    CHECK(e_top > e_mid);
  }
}
