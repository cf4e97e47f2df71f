#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "wiremask/kernels.hpp"
#include "wiremask/netlist.hpp"
#include "wiremask/types.hpp"

namespace wiremask {

/// Uniform m x m discretization of the canvas. Cells may be rectangular.
class GridSpec {
 public:
  GridSpec(int partitions, Rect canvas);
  GridSpec(int partitions, const Netlist& netlist) : GridSpec(partitions, netlist.canvas()) {}

  int m() const { return m_; }
  double cell_w() const { return cell_w_; }
  double cell_h() const { return cell_h_; }
  const Rect& canvas() const { return canvas_; }

  /// Bottom-left corner of column i / row j.
  double x_of(int i) const { return canvas_.x0 + static_cast<double>(i) * cell_w_; }
  double y_of(int j) const { return canvas_.y0 + static_cast<double>(j) * cell_h_; }
  Point corner(GridIndex g) const { return {x_of(g.i), y_of(g.j)}; }

  /// Cells covered by an extent: smallest n >= 1 with n * cell >= extent.
  int columns_for(double width) const;
  int rows_for(double height) const;

  /// Slack for comparisons against the canvas boundary.
  double boundary_tolerance() const { return tolerance_; }

  std::size_t cell_count() const { return static_cast<std::size_t>(m_) * m_; }
  std::size_t flat(GridIndex g) const { return static_cast<std::size_t>(g.j) * m_ + g.i; }

 private:
  int m_;
  Rect canvas_;
  double cell_w_;
  double cell_h_;
  double tolerance_;
};

/// Half-open index range [i0, i1) x [j0, j1).
struct GridRect {
  int i0 = 0;
  int j0 = 0;
  int i1 = 0;
  int j1 = 0;
};

/// Conservative set of grid cells a macro anchored at `anchor` occupies.
GridRect footprint(Size macro, const GridSpec& grid, GridIndex anchor);

/// Keeps the macro inside the canvas when anchored at (i, j).
bool anchor_in_bounds(Size macro, const GridSpec& grid, GridIndex anchor);

/// Exact rectangle of a macro anchored at a grid corner.
Rect anchored_rect(Size macro, const GridSpec& grid, GridIndex anchor);

/// `exact` tests real rectangles instead of the grid footprint bitmap.
enum class OverlapMode { kConservative, kExact };

struct PlacedMacro {
  std::uint32_t macro = 0;
  GridIndex anchor;
  Rect rect;
};

/// Occupied cells plus the placed rectangles. Single owner, not thread-safe.
class Occupancy {
 public:
  explicit Occupancy(const GridSpec& grid, OverlapMode mode = OverlapMode::kConservative,
                     const kernels::KernelTable* kernels = nullptr);

  const GridSpec& grid() const { return *grid_; }
  OverlapMode mode() const { return mode_; }
  std::span<const std::uint8_t> bitmap() const { return bitmap_; }
  const std::vector<PlacedMacro>& placed() const { return placed_; }

  /// Writes an m*m row-major field (row j, column i) of admissible anchors
  /// into `out` and returns how many are set.
  std::size_t valid_anchors(Size macro, std::vector<std::uint8_t>& out) const;
  std::vector<std::uint8_t> valid_anchors(Size macro) const;

  bool is_valid(Size macro, GridIndex anchor) const;

  /// Throws ContractViolation if the anchor is not admissible.
  void commit(std::uint32_t macro, Size size, GridIndex anchor);

  /// Frees the cells of a committed macro. Throws if it is not placed.
  void release(std::uint32_t macro);

 private:
  void mark(const GridRect& r, std::uint8_t value);

  const GridSpec* grid_;
  OverlapMode mode_;
  const kernels::KernelTable* kernels_;
  std::vector<std::uint8_t> bitmap_;
  std::vector<PlacedMacro> placed_;
  mutable std::vector<std::int32_t> sums_;
};

/// Partition count reported for the standard benchmarks, by benchmark name.
std::optional<int> known_partitions(std::string_view benchmark);

/// Built-in table first, then a grid whose cells match the median macro's
/// longer side, clamped to [64, 512].
int default_partitions(const Netlist& netlist);

}  // namespace wiremask
