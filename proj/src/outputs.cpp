#include "dnf/outputs.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "dnf/errors.hpp"

namespace dnf {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw ConfigError("cannot open output file: " + path.string());
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw ConfigError("failed writing output file: " + path.string());
}

}  // namespace

void write_sweep_csv(const std::filesystem::path& path, std::span<const double> nus,
                     std::span<const double> errors) {
  if (nus.size() != errors.size()) {
    throw std::invalid_argument("write_sweep_csv: length mismatch");
  }
  auto out = open_out(path);
  out << "nu,e\n";
  for (std::size_t k = 0; k < nus.size(); ++k) {
    out << fmt17(nus[k]) << "," << fmt17(errors[k]) << "\n";
  }
  finish(out, path);
}

void write_summary_csv(const std::filesystem::path& path, const FitResult& fit) {
  auto out = open_out(path);
  out << "slope,intercept,r2\n";
  out << fmt17(fit.slope) << "," << fmt17(fit.intercept) << "," << fmt17(fit.r2) << "\n";
  finish(out, path);
}

void write_slice_csv(const std::filesystem::path& path, std::span<const double> xi_nodes,
                     std::span<const double> values) {
  if (xi_nodes.size() != values.size()) {
    throw std::invalid_argument("write_slice_csv: length mismatch");
  }
  auto out = open_out(path);
  out << "xi,v\n";
  for (std::size_t j = 0; j < xi_nodes.size(); ++j) {
    out << fmt17(xi_nodes[j]) << "," << fmt17(values[j]) << "\n";
  }
  finish(out, path);
}

void write_line_plot_svg(const std::filesystem::path& path, const std::string& title,
                         const std::string& x_label, const std::string& y_label,
                         std::span<const PlotSeries> series) {
  constexpr double width = 640, height = 480;
  constexpr double ml = 70, mr = 20, mt = 40, mb = 50;  // margins

  double x_min = 0, x_max = 1, y_min = 0, y_max = 1;
  bool have_data = false;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!have_data) {
        x_min = x_max = s.x[i];
        y_min = y_max = s.y[i];
        have_data = true;
      }
      x_min = std::min(x_min, s.x[i]);
      x_max = std::max(x_max, s.x[i]);
      y_min = std::min(y_min, s.y[i]);
      y_max = std::max(y_max, s.y[i]);
    }
  }
  if (x_max == x_min) x_max = x_min + 1;
  if (y_max == y_min) y_max = y_min + 1;

  auto px = [&](double x) { return ml + (x - x_min) / (x_max - x_min) * (width - ml - mr); };
  auto py = [&](double y) { return height - mb - (y - y_min) / (y_max - y_min) * (height - mt - mb); };

  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};

  auto out = open_out(path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
      << title << "</text>\n";

  // axes with extreme tick labels
  out << "<line x1=\"" << ml << "\" y1=\"" << height - mb << "\" x2=\"" << width - mr
      << "\" y2=\"" << height - mb << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << height - mb
      << "\" stroke=\"black\"/>\n";
  out << "<text x=\"" << width / 2 << "\" y=\"" << height - 12
      << "\" text-anchor=\"middle\" font-size=\"12\">" << x_label << "</text>\n";
  out << "<text x=\"16\" y=\"" << height / 2 << "\" text-anchor=\"middle\" font-size=\"12\" "
      << "transform=\"rotate(-90 16 " << height / 2 << ")\">" << y_label << "</text>\n";
  char num[32];
  std::snprintf(num, sizeof(num), "%.4g", x_min);
  out << "<text x=\"" << ml << "\" y=\"" << height - mb + 16
      << "\" text-anchor=\"middle\" font-size=\"10\">" << num << "</text>\n";
  std::snprintf(num, sizeof(num), "%.4g", x_max);
  out << "<text x=\"" << width - mr << "\" y=\"" << height - mb + 16
      << "\" text-anchor=\"middle\" font-size=\"10\">" << num << "</text>\n";
  std::snprintf(num, sizeof(num), "%.4g", y_min);
  out << "<text x=\"" << ml - 6 << "\" y=\"" << height - mb
      << "\" text-anchor=\"end\" font-size=\"10\">" << num << "</text>\n";
  std::snprintf(num, sizeof(num), "%.4g", y_max);
  out << "<text x=\"" << ml - 6 << "\" y=\"" << mt + 4
      << "\" text-anchor=\"end\" font-size=\"10\">" << num << "</text>\n";

  for (std::size_t s = 0; s < series.size(); ++s) {
    const auto& ser = series[s];
    const char* color = colors[s % 5];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < ser.x.size(); ++i) {
      out << px(ser.x[i]) << "," << py(ser.y[i]) << " ";
    }
    out << "\"/>\n";
    out << "<text x=\"" << width - mr - 6 << "\" y=\"" << mt + 16 + 14 * s
        << "\" text-anchor=\"end\" font-size=\"11\" fill=\"" << color << "\">" << ser.label
        << "</text>\n";
  }
  out << "</svg>\n";
  finish(out, path);
}

}  // namespace dnf
