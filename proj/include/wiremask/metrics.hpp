#pragma once

#include <cstddef>
#include <vector>

#include <json.hpp>

#include "wiremask/evaluate.hpp"
#include "wiremask/grid.hpp"
#include "wiremask/netlist.hpp"

namespace wiremask {

enum class CongestionMode {
  kCovered,       // full impact on every cell the box overlaps with positive area
  kAreaWeighted,  // impact scaled by the overlapped fraction of each cell
};

/// RUDY map: each net spreads (w + h) / (w * h) over its pin bounding box.
struct CongestionMap {
  std::vector<double> values;  // row-major m x m
  double rudy = 0.0;           // mean of the top 10% cells
  int m = 0;
};

/// Mean of the ceil(0.1 * n) largest entries.
double top_decile_mean(std::vector<double> values);

/// Nets with zero width or height are widened to one cell around their
/// center before computing their impact.
CongestionMap congestion(const Placement& placement, const Netlist& netlist, const GridSpec& grid,
                         CongestionMode mode = CongestionMode::kCovered);

struct MetricRecord {
  double hpwl = 0.0;
  double rudy = 0.0;
  double overlap_area = 0.0;
  std::size_t oob_count = 0;
  double eval_seconds = 0.0;
};

/// Total pairwise overlap of the macro rectangles at `positions`.
double total_overlap_area(std::span<const Point> positions, const Netlist& netlist);

/// Macros not fully inside the canvas (within the grid's boundary tolerance).
std::size_t out_of_bounds_count(std::span<const Point> positions, const Netlist& netlist,
                                double tolerance = 0.0);

MetricRecord report(const Placement& placement, const Netlist& netlist, const GridSpec& grid,
                    double eval_seconds = 0.0);

nlohmann::json to_json(const MetricRecord& r);

}  // namespace wiremask
