#include "deskmd/plot.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <limits>

#include "deskmd/error.hpp"
#include "deskmd/numfmt.hpp"

namespace deskmd {

namespace {

struct Axes {
  const char* title;
  const char* x_label;
  const char* y_label;
};

Axes axes_for(PlotKind kind) {
  switch (kind) {
    case PlotKind::WallTime:
      return {"Wall-clock time per stage", "Workers p", "Wall-clock time T(p) [s]"};
    case PlotKind::Efficiency:
      return {"Parallel efficiency per stage", "Workers p", "Parallel efficiency E(p) = S(p)/p"};
    case PlotKind::DockingTime:
      return {"Docking time vs conformers", "Conformers n", "Execution time [s]"};
    case PlotKind::Speedup:
      return {"Docking speedup", "Workers p", "Speedup S(p) = T(1)/T(p)"};
  }
  return {"", "", ""};
}

constexpr std::array<const char*, 6> kColors{"#1f77b4", "#d62728", "#2ca02c",
                                             "#ff7f0e", "#9467bd", "#8c564b"};

std::string fmt(double v) {
  // Pixel coordinates at 0.01 px resolution.
  return format_double(std::round(v * 100.0) / 100.0);
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

const char* plot_filename(PlotKind kind) {
  switch (kind) {
    case PlotKind::WallTime: return "walltime.svg";
    case PlotKind::Efficiency: return "efficiency.svg";
    case PlotKind::DockingTime: return "docking_time.svg";
    case PlotKind::Speedup: return "speedup.svg";
  }
  return "plot.svg";
}

std::vector<PlotSeries> build_series(PlotKind kind, const ScalingGroups& groups) {
  std::vector<PlotSeries> out;
  switch (kind) {
    case PlotKind::WallTime:
    case PlotKind::Efficiency: {
      // Largest workload per stage; map order makes the last one win.
      std::map<BenchStage, const std::vector<ScalingRow>*> chosen;
      for (const auto& [key, rows] : groups) chosen[key.first] = &rows;
      for (const auto& [stage, rows] : chosen) {
        PlotSeries s{to_string(stage), {}};
        for (const auto& r : *rows)
          s.points.emplace_back(static_cast<double>(r.workers),
                                kind == PlotKind::WallTime ? r.median_seconds : r.efficiency);
        out.push_back(std::move(s));
      }
      break;
    }
    case PlotKind::Speedup:
      for (const auto& [key, rows] : groups) {
        PlotSeries s{std::string(to_string(key.first)) + " n=" + std::to_string(key.second), {}};
        for (const auto& r : rows) s.points.emplace_back(static_cast<double>(r.workers), r.speedup);
        out.push_back(std::move(s));
      }
      break;
    case PlotKind::DockingTime: {
      PlotSeries sequential{"sequential", {}};
      PlotSeries parallel{"parallel", {}};
      for (const auto& [key, rows] : groups) {
        if (key.first != BenchStage::DOCK || rows.empty()) continue;
        const double n = static_cast<double>(key.second);
        sequential.points.emplace_back(n, rows.front().median_seconds);
        parallel.points.emplace_back(n, rows.back().median_seconds);
      }
      if (!sequential.points.empty()) {
        out.push_back(std::move(sequential));
        out.push_back(std::move(parallel));
      }
      break;
    }
  }
  return out;
}

std::string render_plot(PlotKind kind, std::span<const PlotSeries> series) {
  std::size_t n_points = 0;
  double x_min = std::numeric_limits<double>::infinity();
  double x_max = -x_min;
  double y_max = 0.0;
  for (const auto& s : series)
    for (const auto& [x, y] : s.points) {
      if (!std::isfinite(x) || !std::isfinite(y)) throw InvalidArgument("non-finite plot point");
      x_min = std::min(x_min, x);
      x_max = std::max(x_max, x);
      y_max = std::max(y_max, y);
      ++n_points;
    }
  if (n_points == 0) throw InvalidArgument("nothing to plot");
  if (x_max == x_min) {
    x_min -= 0.5;
    x_max += 0.5;
  }
  if (y_max <= 0.0) y_max = 1.0;
  y_max *= 1.1;

  constexpr double width = 640, height = 420;
  constexpr double left = 80, right = 160, top = 40, bottom = 60;
  const double plot_w = width - left - right;
  const double plot_h = height - top - bottom;
  auto px = [&](double x) { return left + (x - x_min) / (x_max - x_min) * plot_w; };
  auto py = [&](double y) { return top + plot_h - y / y_max * plot_h; };

  const Axes axes = axes_for(kind);
  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(width) + "\" height=\"" +
         fmt(height) + "\" viewBox=\"0 0 " + fmt(width) + " " + fmt(height) + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "<text x=\"" + fmt(left + plot_w / 2) + "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" +
         escape(axes.title) + "</text>\n";
  svg += "<g class=\"axes\" stroke=\"black\">\n";
  svg += "<line x1=\"" + fmt(left) + "\" y1=\"" + fmt(top + plot_h) + "\" x2=\"" + fmt(left + plot_w) +
         "\" y2=\"" + fmt(top + plot_h) + "\"/>\n";
  svg += "<line x1=\"" + fmt(left) + "\" y1=\"" + fmt(top) + "\" x2=\"" + fmt(left) + "\" y2=\"" +
         fmt(top + plot_h) + "\"/>\n";
  svg += "</g>\n";
  for (int t = 0; t <= 4; ++t) {
    const double xv = x_min + (x_max - x_min) * t / 4.0;
    const double yv = y_max * t / 4.0;
    svg += "<text x=\"" + fmt(px(xv)) + "\" y=\"" + fmt(top + plot_h + 18) +
           "\" text-anchor=\"middle\" font-size=\"11\">" + format_double(std::round(xv * 100) / 100) +
           "</text>\n";
    svg += "<text x=\"" + fmt(left - 6) + "\" y=\"" + fmt(py(yv) + 4) +
           "\" text-anchor=\"end\" font-size=\"11\">" + format_double(std::round(yv * 1000) / 1000) +
           "</text>\n";
  }
  svg += "<text class=\"x-label\" x=\"" + fmt(left + plot_w / 2) + "\" y=\"" + fmt(height - 16) +
         "\" text-anchor=\"middle\" font-size=\"13\">" + escape(axes.x_label) + "</text>\n";
  svg += "<text class=\"y-label\" x=\"18\" y=\"" + fmt(top + plot_h / 2) +
         "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 18 " + fmt(top + plot_h / 2) +
         ")\">" + escape(axes.y_label) + "</text>\n";

  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* color = kColors[k % kColors.size()];
    svg += "<g class=\"series\" data-label=\"" + escape(s.label) + "\">\n";
    svg += "<polyline fill=\"none\" stroke=\"" + std::string(color) + "\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < s.points.size(); ++i) {
      if (i) svg += ' ';
      svg += fmt(px(s.points[i].first)) + "," + fmt(py(s.points[i].second));
    }
    svg += "\"/>\n";
    for (const auto& [x, y] : s.points) {
      svg += "<circle cx=\"" + fmt(px(x)) + "\" cy=\"" + fmt(py(y)) + "\" r=\"3\" fill=\"" + color +
             "\" data-x=\"" + format_double(x) + "\" data-y=\"" + format_double(y) + "\"/>\n";
    }
    const double ly = top + 16 + 18 * static_cast<double>(k);
    svg += "<text x=\"" + fmt(left + plot_w + 12) + "\" y=\"" + fmt(ly) + "\" font-size=\"12\" fill=\"" +
           color + "\">" + escape(s.label) + "</text>\n";
    svg += "</g>\n";
  }
  svg += "</svg>\n";
  return svg;
}

void emit_plot(PlotKind kind, std::span<const PlotSeries> series, const std::filesystem::path& path) {
  const auto svg = render_plot(kind, series);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << svg;
  if (!out) throw Error("failed writing " + path.string());
}

}  // namespace deskmd
