#include "wiremask/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace wiremask {

GridSpec::GridSpec(int partitions, Rect canvas) : m_(partitions), canvas_(canvas) {
  if (m_ < 1) throw std::invalid_argument("partition count must be at least 1");
  if (!(canvas.width() > 0.0 && canvas.height() > 0.0)) {
    throw std::invalid_argument("canvas must have positive extent");
  }
  cell_w_ = canvas.width() / m_;
  cell_h_ = canvas.height() / m_;
  tolerance_ = 1e-9 * std::max(canvas.width(), canvas.height());
}

namespace {

int cells_for(double extent, double cell) {
  int n = std::max(1, static_cast<int>(std::ceil(extent / cell)));
  while (n > 1 && static_cast<double>(n - 1) * cell >= extent) --n;
  while (static_cast<double>(n) * cell < extent) ++n;
  return n;
}

// Number of leading columns (or rows) whose anchor keeps `extent` inside.
int admissible(int m, int span, double origin, double cell, double limit, double extent,
               double tol) {
  int n = std::max(0, m - span + 1);
  while (n > 0 && origin + static_cast<double>(n - 1) * cell + extent > limit + tol) --n;
  return n;
}

}  // namespace

int GridSpec::columns_for(double width) const { return cells_for(width, cell_w_); }
int GridSpec::rows_for(double height) const { return cells_for(height, cell_h_); }

GridRect footprint(Size macro, const GridSpec& grid, GridIndex anchor) {
  return {anchor.i, anchor.j, anchor.i + grid.columns_for(macro.width),
          anchor.j + grid.rows_for(macro.height)};
}

Rect anchored_rect(Size macro, const GridSpec& grid, GridIndex anchor) {
  const Point p = grid.corner(anchor);
  return {p.x, p.y, p.x + macro.width, p.y + macro.height};
}

bool anchor_in_bounds(Size macro, const GridSpec& grid, GridIndex anchor) {
  if (anchor.i < 0 || anchor.j < 0) return false;
  const GridRect fp = footprint(macro, grid, anchor);
  if (fp.i1 > grid.m() || fp.j1 > grid.m()) return false;
  const Rect r = anchored_rect(macro, grid, anchor);
  const double tol = grid.boundary_tolerance();
  return r.x1 <= grid.canvas().x1 + tol && r.y1 <= grid.canvas().y1 + tol;
}

Occupancy::Occupancy(const GridSpec& grid, OverlapMode mode, const kernels::KernelTable* kernels)
    : grid_(&grid),
      mode_(mode),
      kernels_(kernels ? kernels : &kernels::active()),
      bitmap_(grid.cell_count(), 0) {}

std::vector<std::uint8_t> Occupancy::valid_anchors(Size macro) const {
  std::vector<std::uint8_t> out;
  valid_anchors(macro, out);
  return out;
}

std::size_t Occupancy::valid_anchors(Size macro, std::vector<std::uint8_t>& out) const {
  const GridSpec& g = *grid_;
  const int m = g.m();
  out.resize(g.cell_count());
  const int fw = g.columns_for(macro.width);
  const int fh = g.rows_for(macro.height);
  const double tol = g.boundary_tolerance();
  const int cols = admissible(m, fw, g.canvas().x0, g.cell_w(), g.canvas().x1, macro.width, tol);
  const int rows = admissible(m, fh, g.canvas().y0, g.cell_h(), g.canvas().y1, macro.height, tol);

  if (mode_ == OverlapMode::kConservative) {
    sums_.resize(static_cast<std::size_t>(m + 1) * (m + 1));
    kernels_->integral_image(bitmap_, static_cast<std::size_t>(m), sums_);
    return kernels_->free_windows(sums_, static_cast<std::size_t>(m), static_cast<std::size_t>(fw),
                                  static_cast<std::size_t>(fh), static_cast<std::size_t>(cols),
                                  static_cast<std::size_t>(rows), out);
  }

  std::fill(out.begin(), out.end(), 0);
  for (int j = 0; j < rows; ++j) {
    std::fill(out.begin() + static_cast<std::ptrdiff_t>(j) * m,
              out.begin() + static_cast<std::ptrdiff_t>(j) * m + cols, 1);
  }
  for (const PlacedMacro& p : placed_) {
    int i0 = 0;
    while (i0 < cols && !(g.x_of(i0) + macro.width > p.rect.x0)) ++i0;
    int i1 = i0;
    while (i1 < cols && g.x_of(i1) < p.rect.x1) ++i1;
    int j0 = 0;
    while (j0 < rows && !(g.y_of(j0) + macro.height > p.rect.y0)) ++j0;
    int j1 = j0;
    while (j1 < rows && g.y_of(j1) < p.rect.y1) ++j1;
    for (int j = j0; j < j1; ++j) {
      std::fill(out.begin() + static_cast<std::ptrdiff_t>(j) * m + i0,
                out.begin() + static_cast<std::ptrdiff_t>(j) * m + i1, 0);
    }
  }
  return static_cast<std::size_t>(std::count(out.begin(), out.end(), std::uint8_t{1}));
}

bool Occupancy::is_valid(Size macro, GridIndex anchor) const {
  if (!anchor_in_bounds(macro, *grid_, anchor)) return false;
  if (mode_ == OverlapMode::kExact) {
    const Rect r = anchored_rect(macro, *grid_, anchor);
    return std::none_of(placed_.begin(), placed_.end(),
                        [&](const PlacedMacro& p) { return p.rect.overlap_area(r) > 0.0; });
  }
  const GridRect fp = footprint(macro, *grid_, anchor);
  const int m = grid_->m();
  for (int j = fp.j0; j < fp.j1; ++j) {
    for (int i = fp.i0; i < fp.i1; ++i) {
      if (bitmap_[static_cast<std::size_t>(j) * m + i] != 0) return false;
    }
  }
  return true;
}

void Occupancy::mark(const GridRect& r, std::uint8_t value) {
  const int m = grid_->m();
  for (int j = r.j0; j < std::min(r.j1, m); ++j) {
    for (int i = r.i0; i < std::min(r.i1, m); ++i) bitmap_[static_cast<std::size_t>(j) * m + i] = value;
  }
}

void Occupancy::commit(std::uint32_t macro, Size size, GridIndex anchor) {
  if (!is_valid(size, anchor)) {
    throw ContractViolation("anchor (" + std::to_string(anchor.i) + ", " + std::to_string(anchor.j) +
                            ") is not admissible for macro " + std::to_string(macro));
  }
  mark(footprint(size, *grid_, anchor), 1);
  placed_.push_back({macro, anchor, anchored_rect(size, *grid_, anchor)});
}

void Occupancy::release(std::uint32_t macro) {
  auto it = std::find_if(placed_.begin(), placed_.end(),
                         [&](const PlacedMacro& p) { return p.macro == macro; });
  if (it == placed_.end()) {
    throw ContractViolation("macro " + std::to_string(macro) + " is not placed");
  }
  mark(footprint({it->rect.width(), it->rect.height()}, *grid_, it->anchor), 0);
  placed_.erase(it);
}

std::optional<int> known_partitions(std::string_view benchmark) {
  struct Entry {
    std::string_view name;
    int m;
  };
  static constexpr Entry kTable[] = {
      {"adaptec1", 160}, {"adaptec2", 158}, {"adaptec3", 113}, {"adaptec4", 108},
      {"bigblue1", 160}, {"bigblue3", 234}, {"bigblue4", 273}, {"ariane", 357},
  };
  for (const Entry& e : kTable) {
    if (e.name == benchmark) return e.m;
  }
  return std::nullopt;
}

int default_partitions(const Netlist& netlist) {
  constexpr int kMin = 64;
  constexpr int kMax = 512;
  if (auto m = known_partitions(netlist.name())) return *m;
  if (netlist.macro_count() == 0) return kMin;

  std::vector<double> sides;
  sides.reserve(netlist.macro_count());
  for (std::size_t k = 0; k < netlist.macro_count(); ++k) {
    const Size s = netlist.macro_size(k);
    sides.push_back(std::max(s.width, s.height));
  }
  auto mid = sides.begin() + static_cast<std::ptrdiff_t>(sides.size() / 2);
  std::nth_element(sides.begin(), mid, sides.end());
  const double extent = std::max(netlist.canvas_width(), netlist.canvas_height());
  const long m = std::lround(extent / *mid);
  return static_cast<int>(std::clamp<long>(m, kMin, kMax));
}

}  // namespace wiremask
