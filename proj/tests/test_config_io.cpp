#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>

#include "dnf/config.hpp"
#include "dnf/errors.hpp"
#include "dnf/outputs.hpp"
#include "dnf/snapshot_io.hpp"
#include "dnf/stepper.hpp"
#include "test_support.hpp"

using namespace dnf;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "dnf_unit_tests";
  fs::create_directories(dir);
  return dir / name;
}

fs::path write_text(const std::string& name, const std::string& content) {
  const fs::path p = temp_file(name);
  std::ofstream out(p, std::ios::trunc);
  out << content;
  return p;
}

}  // namespace

TEST_CASE("parse_config reads the bundled reference configuration") {
  const fs::path path = fs::path(DNF_SOURCE_DIR) / "configs" / "fig2.cfg";
  const RunConfig cfg = parse_config(path);
  CHECK(cfg.gamma == 0.5);
  CHECK(cfg.sigma == 0.5);
  CHECK(cfg.kappa == 1.0);
  CHECK(cfg.xi0 == 1.0);
  CHECK(cfg.mu == 1e3);
  CHECK(cfg.theta == 0.1);
  CHECK(cfg.rho == 5.0);
  CHECK(cfg.x0 == 20.0);
  CHECK(cfg.grid.L_xi == 3.0);
  CHECK(cfg.grid.L_x == doctest::Approx(24.0 * M_PI).epsilon(1e-15));
  CHECK(cfg.T == 3.0);
  CHECK(cfg.tau == 0.05);
  CHECK(cfg.nu == 0.1);
  CHECK(cfg.grid.n_x == 1024);  // desk preset
  CHECK(cfg.grid.n_xi == 256);
  CHECK(cfg.init_sigma == cfg.sigma);
  REQUIRE(cfg.nus.size() == 5);
  CHECK(cfg.nus[0] == 0.0);
  CHECK(cfg.nus[4] == 0.1);
}

TEST_CASE("parse_config error reporting") {
  SUBCASE("an empty file lists every missing required key") {
    const fs::path p = write_text("empty.cfg", "");
    try {
      parse_config(p);
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      const std::string msg = e.what();
      for (const char* key : {"grid", "L_x", "L_xi", "model.gamma", "model.nu", "model.kappa",
                              "model.sigma", "model.xi0", "model.mu", "model.theta", "model.rho",
                              "model.x0", "time.tau", "time.T"}) {
        INFO("missing mention of ", key);
        CHECK(msg.find(key) != std::string::npos);
      }
    }
  }

  SUBCASE("grid invariants are rejected") {
    const fs::path p = write_text("badgrid.cfg",
                                  "[grid]\nn_x = 64\nn_xi = 2\nL_x = 10\nL_xi = 3\n"
                                  "[model]\ngamma=0.5\nnu=0.1\nkappa=1\nsigma=0.5\nxi0=1\n"
                                  "mu=1000\ntheta=0.1\nrho=5\nx0=20\n"
                                  "[time]\ntau=0.05\nT=1\n");
    CHECK_THROWS_WITH_AS(parse_config(p), doctest::Contains("n_xi"), ConfigError);
  }

  SUBCASE("unknown keys and sections carry line numbers") {
    const fs::path p = write_text("unknown.cfg", "[grid]\nbogus_key = 1\n[nonsense]\n");
    try {
      parse_config(p);
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      const std::string msg = e.what();
      CHECK(msg.find("bogus_key") != std::string::npos);
      CHECK(msg.find("line 2") != std::string::npos);
      CHECK(msg.find("nonsense") != std::string::npos);
      CHECK(msg.find("line 3") != std::string::npos);
    }
  }

  SUBCASE("duplicate keys are rejected") {
    const fs::path p = write_text("dup.cfg", "[time]\ntau = 0.05\ntau = 0.1\n");
    CHECK_THROWS_WITH_AS(parse_config(p), doctest::Contains("duplicate"), ConfigError);
  }

  SUBCASE("missing file") {
    CHECK_THROWS_AS(parse_config(temp_file("does_not_exist.cfg")), ConfigError);
  }

  SUBCASE("scale and explicit node counts are mutually exclusive") {
    const fs::path p = write_text("scale.cfg",
                                  "[grid]\nscale = desk\nn_x = 64\nL_x = 10\nL_xi = 3\n");
    CHECK_THROWS_WITH_AS(parse_config(p), doctest::Contains("mutually exclusive"), ConfigError);
  }
}

TEST_CASE("config write/parse roundtrip") {
  const fs::path src = fs::path(DNF_SOURCE_DIR) / "configs" / "fig2.cfg";
  const RunConfig cfg = parse_config(src);
  const fs::path copy = temp_file("roundtrip.cfg");
  write_config(cfg, copy);
  const RunConfig again = parse_config(copy);
  CHECK(again == cfg);

  SUBCASE("full-scale preset stays valid") {
    RunConfig full = cfg;
    apply_scale_preset(full, true);
    validate_config(full);
    CHECK(full.grid.n_x == 4096);
    CHECK(full.grid.n_xi == 1024);
  }
}

TEST_CASE("snapshot roundtrip is bitwise") {
  auto grid = make_grid({64, 33, 3.0, 2.0});
  std::mt19937_64 rng(77);
  const Field f = test::random_field(grid, rng, -10.0, 10.0);
  const fs::path p = temp_file("field.dnf");
  write_snapshot(f, 1.25, p);

  CHECK(fs::file_size(p) == 44 + 8 * 64 * 33);

  const Snapshot back = read_snapshot(p);
  CHECK(back.t == 1.25);
  CHECK(back.field.grid().spec == grid->spec);
  CHECK(std::memcmp(back.field.data().data(), f.data().data(),
                    f.data().size() * sizeof(double)) == 0);
}

TEST_CASE("snapshot error handling") {
  auto grid = make_grid({16, 5, 1.0, 1.0});
  const Field f(grid, 1.0);
  const fs::path p = temp_file("trunc.dnf");
  write_snapshot(f, 0.0, p);

  SUBCASE("truncated file is a size mismatch") {
    fs::resize_file(p, fs::file_size(p) - 9);
    CHECK_THROWS_WITH_AS(read_snapshot(p), doctest::Contains("size mismatch"), ConfigError);
  }

  SUBCASE("corrupted magic is rejected") {
    std::fstream io(p, std::ios::in | std::ios::out | std::ios::binary);
    io.seekp(0);
    io.write("XXXX", 4);
    io.close();
    CHECK_THROWS_WITH_AS(read_snapshot(p), doctest::Contains("magic"), ConfigError);
  }
}

TEST_CASE("desk-scale run snapshot header reads back") {
  // the t = 3 field of the reference desk run, written and reread
  ModelSpec m = test::fig2_model();
  m.nu = 0.0;
  auto grid = make_grid(test::fig2_grid(1024, 256));
  const TimeGrid tg = TimeGrid::make(0.05, 3.0);
  const Trajectory traj = run(m, grid, tg, SnapshotPolicy{60});
  const fs::path p = temp_file("fig2_t3.dnf");
  write_snapshot(traj.snapshots.back(), 3.0, p);

  const Snapshot back = read_snapshot(p);
  CHECK(back.field.nx() == 1024);
  CHECK(back.field.nxi() == 256);
  CHECK(back.t == 3.0);
}

TEST_CASE("slice CSV has one row per xi node") {
  auto grid = make_grid({8, 33, 1.0, 3.0});
  const std::vector<double> values(33, 0.5);
  const fs::path p = temp_file("slice.csv");
  write_slice_csv(p, grid->xi_nodes, values);
  std::ifstream in(p);
  std::string line;
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 34);  // header + n_xi
}

TEST_CASE("CSV values reparse to the in-memory doubles") {
  const std::vector<double> nus = {0.0, 0.1, 1.0 / 3.0, 1e-17, 123456.789e10};
  const std::vector<double> errors = {0.0, 2.0 / 7.0, 1.0 / 3.0, 5e-300, M_PI};
  const fs::path p = temp_file("sweep.csv");
  write_sweep_csv(p, nus, errors);

  std::ifstream in(p);
  std::string header;
  std::getline(in, header);
  CHECK(header == "nu,e");
  for (std::size_t k = 0; k < nus.size(); ++k) {
    std::string line;
    REQUIRE(std::getline(in, line));
    const auto comma = line.find(',');
    REQUIRE(comma != std::string::npos);
    CHECK(std::strtod(line.substr(0, comma).c_str(), nullptr) == nus[k]);
    CHECK(std::strtod(line.substr(comma + 1).c_str(), nullptr) == errors[k]);
  }
}
