#pragma once

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "deskmd/bench.hpp"

namespace deskmd {

enum class PlotKind { WallTime, Efficiency, DockingTime, Speedup };

const char* plot_filename(PlotKind kind);

struct PlotSeries {
  std::string label;
  std::vector<std::pair<double, double>> points;  // data coordinates
};

using ScalingGroups = std::map<GroupKey, std::vector<ScalingRow>>;

// Series for each kind:
//   WallTime / Efficiency: one per stage (largest workload), x = workers.
//   Speedup: one per (stage, workload) group, x = workers.
//   DockingTime: "sequential" (T at 1 worker) and "parallel" (T at the most
//   workers) against the DOCK workload.
std::vector<PlotSeries> build_series(PlotKind kind, const ScalingGroups& groups);

// Standalone SVG document. Each series is a <polyline>; each vertex also has
// a marker carrying its data coordinates in data-x / data-y attributes.
std::string render_plot(PlotKind kind, std::span<const PlotSeries> series);

void emit_plot(PlotKind kind, std::span<const PlotSeries> series, const std::filesystem::path& path);

}  // namespace deskmd
