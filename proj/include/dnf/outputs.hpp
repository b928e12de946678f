#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "dnf/experiments.hpp"

namespace dnf {

/// Shortest decimal form that reparses to the identical double (%.17g).
std::string fmt17(double v);

/// CSV with header "nu,e", one row per sweep point including nu = 0.
void write_sweep_csv(const std::filesystem::path& path, std::span<const double> nus,
                     std::span<const double> errors);

/// CSV with header "slope,intercept,r2" and a single data row.
void write_summary_csv(const std::filesystem::path& path, const FitResult& fit);

/// CSV with header "xi,v", one row per xi node.
void write_slice_csv(const std::filesystem::path& path, std::span<const double> xi_nodes,
                     std::span<const double> values);

/// One named polyline of an SVG plot.
struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

/// Minimal single-file vector plot: axes, tick labels at the extremes, one
/// polyline per series. Convenience output only; nothing downstream parses it.
void write_line_plot_svg(const std::filesystem::path& path, const std::string& title,
                         const std::string& x_label, const std::string& y_label,
                         std::span<const PlotSeries> series);

}  // namespace dnf
