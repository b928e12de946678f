#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "dnf/config.hpp"
#include "dnf/errors.hpp"
#include "dnf/experiments.hpp"
#include "dnf/kernels.hpp"
#include "dnf/model.hpp"
#include "dnf/outputs.hpp"
#include "dnf/snapshot_io.hpp"
#include "dnf/stepper.hpp"
#include "dnf/validate.hpp"

namespace fs = std::filesystem;

namespace {

std::string nu_tag(double nu) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", nu);
  return buf;
}

dnf::RunConfig load(const std::string& path, bool full) {
  dnf::RunConfig cfg = dnf::parse_config(path);
  if (full) {
    dnf::apply_scale_preset(cfg, true);
    dnf::validate_config(cfg);
  }
  return cfg;
}

fs::path ensure_out_dir(const dnf::RunConfig& cfg) {
  fs::path dir(cfg.out_dir);
  fs::create_directories(dir);
  return dir;
}

int run_simulate(const dnf::RunConfig& cfg) {
  const fs::path dir = ensure_out_dir(cfg);
  const auto grid = dnf::make_grid(cfg.grid);
  const dnf::TimeGrid tg = cfg.time();
  const dnf::Trajectory traj =
      dnf::run(cfg.model(), grid, tg, dnf::SnapshotPolicy{cfg.snapshot_every});

  for (std::size_t k = 0; k < traj.snapshots.size(); ++k) {
    char name[64];
    std::snprintf(name, sizeof(name), "snapshot_%06ld.dnf", traj.snapshot_steps[k]);
    dnf::write_snapshot(traj.snapshots[k], tg.t(traj.snapshot_steps[k]), dir / name);
  }
  {
    std::ofstream norms(dir / "norms.csv", std::ios::trunc);
    norms << "t,l2_norm\n";
    for (long n = 0; n <= tg.n_steps; ++n) {
      norms << dnf::fmt17(tg.t(n)) << "," << dnf::fmt17(traj.step_norms[n]) << "\n";
    }
  }
  std::cout << "simulate: " << traj.snapshots.size() << " snapshots, sup-norm " << traj.sup_norm
            << ", outputs in " << dir.string() << "\n";
  return 0;
}

int run_sweep(const dnf::RunConfig& cfg) {
  const fs::path dir = ensure_out_dir(cfg);
  const dnf::SweepResult result = dnf::nu_sweep(cfg.sweep());

  dnf::write_sweep_csv(dir / "sweep.csv", result.nus, result.errors);
  dnf::write_summary_csv(dir / "sweep_summary.csv", result.fit);

  std::vector<dnf::PlotSeries> series(2);
  series[0].label = "e(nu)";
  series[0].x = result.nus;
  series[0].y = result.errors;
  series[1].label = "fit";
  for (double nu : result.nus) {
    series[1].x.push_back(nu);
    series[1].y.push_back(result.fit.slope * nu + result.fit.intercept);
  }
  dnf::write_line_plot_svg(dir / "sweep.svg", "squared distance vs diffusivity", "nu", "e",
                           series);

  std::cout << "sweep: slope " << dnf::fmt17(result.fit.slope) << ", intercept "
            << dnf::fmt17(result.fit.intercept) << ", r2 " << dnf::fmt17(result.fit.r2);
  if (result.fit.degenerate) std::cout << " (degenerate fit: all e identical)";
  std::cout << ", outputs in " << dir.string() << "\n";
  return 0;
}

int run_profiles(const dnf::RunConfig& cfg) {
  const fs::path dir = ensure_out_dir(cfg);
  const dnf::ProfileResult res = dnf::profile_experiment(cfg.model(), cfg.grid, cfg.time());
  const auto grid = res.base.at_t1.grid_ptr();

  std::vector<dnf::PlotSeries> series;
  for (const auto* slices : {&res.base, &res.diffusive}) {
    const std::string tag = nu_tag(slices->nu);
    dnf::write_snapshot(slices->at_t1, 1.0, dir / ("profile_nu" + tag + "_t1.dnf"));
    dnf::write_snapshot(slices->at_t3, 3.0, dir / ("profile_nu" + tag + "_t3.dnf"));
    dnf::write_slice_csv(dir / ("slice_nu" + tag + "_t1.csv"), grid->xi_nodes, slices->slice_t1);
    dnf::write_slice_csv(dir / ("slice_nu" + tag + "_t3.csv"), grid->xi_nodes, slices->slice_t3);
    for (const char* when : {"t=1", "t=3"}) {
      dnf::PlotSeries s;
      s.label = "nu=" + tag + " " + when;
      s.x = grid->xi_nodes;
      const auto& v = (when[2] == '1') ? slices->slice_t1 : slices->slice_t3;
      s.y = v;
      series.push_back(std::move(s));
    }
  }
  dnf::write_line_plot_svg(dir / "profiles.svg", "x = 0 voltage profiles", "xi", "v", series);

  const auto report = [&](const dnf::ProfileSlices& s) {
    const auto maxima = dnf::local_maxima(s.slice_t3, grid->xi_nodes);
    std::cout << "  nu=" << nu_tag(s.nu) << ": " << maxima.size()
              << " maxima at t=3, half-height width "
              << dnf::half_height_width(s.slice_t3, grid->xi_nodes) << "\n";
  };
  std::cout << "profiles: outputs in " << dir.string() << "\n";
  report(res.base);
  report(res.diffusive);
  return 0;
}

int run_kf(const dnf::RunConfig& cfg) {
  const dnf::Grid grid = dnf::build_grid(cfg.grid);
  std::cout << dnf::fmt17(dnf::estimate_KF(cfg.model(), grid)) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dendritic neural field simulator"};
  app.require_subcommand(1);

  struct SubcommandArgs {
    std::string config;
    bool full = false;
  };
  SubcommandArgs sim, sweep, profiles, kf;

  auto add_cfg_subcommand = [&](const char* name, const char* desc, SubcommandArgs& args) {
    CLI::App* sub = app.add_subcommand(name, desc);
    sub->add_option("config", args.config, "run configuration file")->required();
    sub->add_flag("--full", args.full, "override the grid to the full-scale preset (4096 x 1024)");
    return sub;
  };

  CLI::App* sub_sim = add_cfg_subcommand("simulate", "single run with field snapshots", sim);
  CLI::App* sub_sweep =
      add_cfg_subcommand("sweep", "diffusivity sweep with linear regression", sweep);
  CLI::App* sub_prof =
      add_cfg_subcommand("profiles", "profile dynamics at t = 1 and t = 3", profiles);
  CLI::App* sub_kf = add_cfg_subcommand("kf", "print the operator constant K_F", kf);
  CLI::App* sub_validate = app.add_subcommand("validate", "run the oracle/property suites");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }

  try {
    if (sub_sim->parsed()) return run_simulate(load(sim.config, sim.full));
    if (sub_sweep->parsed()) return run_sweep(load(sweep.config, sweep.full));
    if (sub_prof->parsed()) return run_profiles(load(profiles.config, profiles.full));
    if (sub_kf->parsed()) return run_kf(load(kf.config, kf.full));
    if (sub_validate->parsed()) return dnf::run_validation_suite(std::cout) ? 0 : 1;
  } catch (const dnf::ConfigError& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const dnf::BlowupError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
