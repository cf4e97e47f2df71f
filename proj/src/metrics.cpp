#include "wiremask/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

namespace wiremask {

namespace {

double cell_lo(const GridSpec& g, int i, bool x_axis) {
  return x_axis ? g.x_of(i) : g.y_of(i);
}

double cell_hi(const GridSpec& g, int i, bool x_axis) {
  if (i + 1 == g.m()) return x_axis ? g.canvas().x1 : g.canvas().y1;
  return x_axis ? g.x_of(i + 1) : g.y_of(i + 1);
}

// Cells [a, b) along one axis that overlap (lo, hi) with positive length.
std::pair<int, int> cell_range(const GridSpec& g, double lo, double hi, bool x_axis) {
  const int m = g.m();
  if (!(hi > lo)) return {0, 0};
  const double origin = x_axis ? g.canvas().x0 : g.canvas().y0;
  const double cell = x_axis ? g.cell_w() : g.cell_h();
  int a = std::clamp(static_cast<int>(std::floor((lo - origin) / cell)), 0, m - 1);
  while (a > 0 && cell_lo(g, a, x_axis) > lo) --a;
  while (a < m && cell_hi(g, a, x_axis) <= lo) ++a;
  int b = std::clamp(static_cast<int>(std::ceil((hi - origin) / cell)), a, m);
  while (b < m && cell_lo(g, b, x_axis) < hi) ++b;
  while (b > a && cell_lo(g, b - 1, x_axis) >= hi) --b;
  return {a, b};
}

}  // namespace

double top_decile_mean(std::vector<double> values) {
  if (values.empty()) return 0.0;
  const std::size_t top = (values.size() + 9) / 10;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(top - 1),
                   values.end(), std::greater<>());
  double sum = 0.0;
  for (std::size_t i = 0; i < top; ++i) sum += values[i];
  return sum / static_cast<double>(top);
}

CongestionMap congestion(const Placement& placement, const Netlist& netlist, const GridSpec& grid,
                         CongestionMode mode) {
  if (!placement.feasible) throw ContractViolation("congestion of an infeasible placement");
  const int m = grid.m();
  CongestionMap map;
  map.m = m;
  map.values.assign(grid.cell_count(), 0.0);
  const double cell_area = grid.cell_w() * grid.cell_h();
  const Rect& canvas = grid.canvas();

  for (const Net& net : netlist.nets()) {
    Box b;
    for (const Point& p : net.fixed_pins) b.add(p.x, p.y);
    for (const PinRef& pin : net.pins) {
      const Point& at = placement.positions[netlist.macro_index_of(pin.cell)];
      b.add(at.x + pin.offset_x, at.y + pin.offset_y);
    }
    if (b.empty()) continue;
    double x0 = b.lo_x, x1 = b.hi_x, y0 = b.lo_y, y1 = b.hi_y;
    if (x1 - x0 == 0.0) {
      x0 -= grid.cell_w() / 2;
      x1 += grid.cell_w() / 2;
    }
    if (y1 - y0 == 0.0) {
      y0 -= grid.cell_h() / 2;
      y1 += grid.cell_h() / 2;
    }
    const double w = x1 - x0;
    const double h = y1 - y0;
    const double impact = (w + h) / (w * h);

    x0 = std::max(x0, canvas.x0);
    x1 = std::min(x1, canvas.x1);
    y0 = std::max(y0, canvas.y0);
    y1 = std::min(y1, canvas.y1);
    const auto [ia, ib] = cell_range(grid, x0, x1, true);
    const auto [ja, jb] = cell_range(grid, y0, y1, false);
    for (int j = ja; j < jb; ++j) {
      double* row = map.values.data() + static_cast<std::size_t>(j) * m;
      const double oy = std::min(y1, cell_hi(grid, j, false)) - std::max(y0, cell_lo(grid, j, false));
      for (int i = ia; i < ib; ++i) {
        if (mode == CongestionMode::kCovered) {
          row[i] += impact;
        } else {
          const double ox = std::min(x1, cell_hi(grid, i, true)) - std::max(x0, cell_lo(grid, i, true));
          row[i] += (ox * oy / cell_area) * impact;
        }
      }
    }
  }
  map.rudy = top_decile_mean(map.values);
  return map;
}

double total_overlap_area(std::span<const Point> positions, const Netlist& netlist) {
  std::vector<Rect> rects;
  rects.reserve(positions.size());
  for (std::size_t i = 0; i < positions.size(); ++i) {
    const Size s = netlist.macro_size(i);
    rects.push_back({positions[i].x, positions[i].y, positions[i].x + s.width, positions[i].y + s.height});
  }
  std::sort(rects.begin(), rects.end(), [](const Rect& a, const Rect& b) { return a.x0 < b.x0; });
  double total = 0.0;
  for (std::size_t i = 0; i < rects.size(); ++i) {
    for (std::size_t j = i + 1; j < rects.size() && rects[j].x0 < rects[i].x1; ++j) {
      total += rects[i].overlap_area(rects[j]);
    }
  }
  return total;
}

std::size_t out_of_bounds_count(std::span<const Point> positions, const Netlist& netlist,
                                double tolerance) {
  const Rect& c = netlist.canvas();
  std::size_t n = 0;
  for (std::size_t i = 0; i < positions.size(); ++i) {
    const Size s = netlist.macro_size(i);
    const Point& p = positions[i];
    if (p.x < c.x0 - tolerance || p.y < c.y0 - tolerance || p.x + s.width > c.x1 + tolerance ||
        p.y + s.height > c.y1 + tolerance) {
      ++n;
    }
  }
  return n;
}

MetricRecord report(const Placement& placement, const Netlist& netlist, const GridSpec& grid,
                    double eval_seconds) {
  MetricRecord r;
  r.hpwl = hpwl_full(placement.positions, netlist);
  r.rudy = congestion(placement, netlist, grid, CongestionMode::kCovered).rudy;
  r.overlap_area = total_overlap_area(placement.positions, netlist);
  r.oob_count = out_of_bounds_count(placement.positions, netlist, grid.boundary_tolerance());
  r.eval_seconds = eval_seconds;
  return r;
}

nlohmann::json to_json(const MetricRecord& r) {
  return {{"hpwl", r.hpwl},
          {"rudy", r.rudy},
          {"overlap_area", r.overlap_area},
          {"oob_count", r.oob_count},
          {"eval_seconds", r.eval_seconds}};
}

}  // namespace wiremask
