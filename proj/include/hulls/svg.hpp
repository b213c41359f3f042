#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hulls/experiments.hpp"
#include "hulls/geometry.hpp"

// Minimal SVG emission for convergence curves and 2-D hull overlays. The CSV
// files are the contract; these plots are a convenience rendered from the
// same in-memory data.

namespace hulls::svg {

namespace detail {

struct Frame {
  double w = 640, h = 480, margin = 56;
  double x0, x1, y0, y1;  // data ranges

  double px(double x) const { return margin + (x - x0) / (x1 - x0) * (w - 2 * margin); }
  double py(double y) const { return h - margin - (y - y0) / (y1 - y0) * (h - 2 * margin); }
};

inline void open_svg(std::ofstream& out, const Frame& f) {
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << f.w << "\" height=\""
      << f.h << "\" viewBox=\"0 0 " << f.w << " " << f.h << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

inline void axes(std::ofstream& out, const Frame& f, const std::string& xlabel,
                 const std::string& ylabel) {
  out << "<rect x=\"" << f.margin << "\" y=\"" << f.margin << "\" width=\""
      << f.w - 2 * f.margin << "\" height=\"" << f.h - 2 * f.margin
      << "\" fill=\"none\" stroke=\"#444\"/>\n";
  out << "<text x=\"" << f.w / 2 << "\" y=\"" << f.h - 12
      << "\" font-size=\"13\" text-anchor=\"middle\">" << xlabel << "</text>\n";
  out << "<text x=\"14\" y=\"" << f.h / 2
      << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 14 "
      << f.h / 2 << ")\">" << ylabel << "</text>\n";
}

inline void polyline(std::ofstream& out, const Frame& f, std::span<const double> xs,
                     std::span<const double> ys, const std::string& stroke,
                     double width, const std::string& dash = "") {
  out << "<polyline fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"" << width
      << "\"";
  if (!dash.empty()) out << " stroke-dasharray=\"" << dash << "\"";
  out << " points=\"";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    out << f.px(xs[i]) << "," << f.py(ys[i]) << " ";
  }
  out << "\"/>\n";
}

inline void tick_labels_x(std::ofstream& out, const Frame& f,
                          std::span<const double> xs,
                          std::span<const std::string> labels) {
  for (std::size_t i = 0; i < xs.size(); ++i) {
    out << "<text x=\"" << f.px(xs[i]) << "\" y=\"" << f.h - f.margin + 16
        << "\" font-size=\"11\" text-anchor=\"middle\">" << labels[i] << "</text>\n";
  }
}

inline void tick_labels_y(std::ofstream& out, const Frame& f,
                          std::span<const double> ys) {
  for (double y : ys) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", y);
    out << "<text x=\"" << f.margin - 6 << "\" y=\"" << f.py(y) + 4
        << "\" font-size=\"11\" text-anchor=\"end\">" << buf << "</text>\n";
  }
}

}  // namespace detail

// Quantile fan of a convergence curve on a log10(n) axis.
inline void write_convergence_svg(const std::filesystem::path& path,
                                  const ConvergenceCurve& curve,
                                  const std::string& title) {
  if (curve.checkpoints.empty()) throw std::invalid_argument("svg: empty curve");
  std::vector<double> xs(curve.checkpoints.size());
  std::vector<std::string> xlabels(curve.checkpoints.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    xs[i] = std::log10(static_cast<double>(curve.checkpoints[i]));
    xlabels[i] = std::to_string(curve.checkpoints[i]);
  }
  double ymax = 0.0;
  for (const auto& row : curve.per_path) {
    for (double v : row) ymax = std::max(ymax, v);
  }
  detail::Frame f;
  f.x0 = xs.front();
  f.x1 = xs.back() > xs.front() ? xs.back() : xs.front() + 1;
  f.y0 = 0.0;
  f.y1 = ymax > 0 ? 1.05 * ymax : 1.0;

  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  detail::open_svg(out, f);
  detail::axes(out, f, "n (log scale)", "grid Hausdorff distance");
  for (const auto& row : curve.per_path) {
    detail::polyline(out, f, xs, row, "#c8d4e8", 0.8);
  }
  detail::polyline(out, f, xs, curve.q10, "#7a9cc6", 1.2, "4 3");
  detail::polyline(out, f, xs, curve.q90, "#7a9cc6", 1.2, "4 3");
  detail::polyline(out, f, xs, curve.q50, "#1f4e96", 2.2);
  detail::tick_labels_x(out, f, xs, xlabels);
  const double yticks[] = {f.y0, (f.y0 + f.y1) / 2, f.y1};
  detail::tick_labels_y(out, f, yticks);
  out << "<text x=\"" << f.w / 2 << "\" y=\"22\" font-size=\"14\" text-anchor=\"middle\">"
      << title << "</text>\n</svg>\n";
}

// Normalized empirical hull against the target polygon.
inline void write_overlay_svg(const std::filesystem::path& path,
                              std::span<const Point2> hull,
                              std::span<const Point2> target,
                              const std::string& title) {
  double r = 1e-9;
  for (const auto& p : hull) r = std::max({r, std::abs(p.x), std::abs(p.y)});
  for (const auto& p : target) r = std::max({r, std::abs(p.x), std::abs(p.y)});
  r *= 1.15;
  detail::Frame f;
  f.w = 520;
  f.h = 520;
  f.x0 = -r;
  f.x1 = r;
  f.y0 = -r;
  f.y1 = r;

  auto polygon = [&](std::ofstream& out, std::span<const Point2> pts,
                     const std::string& stroke, const std::string& fill) {
    out << "<polygon points=\"";
    for (const auto& p : pts) out << f.px(p.x) << "," << f.py(p.y) << " ";
    out << "\" fill=\"" << fill << "\" stroke=\"" << stroke << "\" stroke-width=\"1.6\"/>\n";
  };

  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  detail::open_svg(out, f);
  // axes through the origin
  out << "<line x1=\"" << f.px(f.x0) << "\" y1=\"" << f.py(0) << "\" x2=\"" << f.px(f.x1)
      << "\" y2=\"" << f.py(0) << "\" stroke=\"#ccc\"/>\n";
  out << "<line x1=\"" << f.px(0) << "\" y1=\"" << f.py(f.y0) << "\" x2=\"" << f.px(0)
      << "\" y2=\"" << f.py(f.y1) << "\" stroke=\"#ccc\"/>\n";
  polygon(out, target, "#b03030", "none");
  polygon(out, hull, "#1f4e96", "rgba(31,78,150,0.12)");
  out << "<text x=\"" << f.w / 2 << "\" y=\"22\" font-size=\"14\" text-anchor=\"middle\">"
      << title << "</text>\n</svg>\n";
}

}  // namespace hulls::svg
