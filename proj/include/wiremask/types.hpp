#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace wiremask {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

struct Size {
  double width = 0.0;
  double height = 0.0;
};

/// Axis-aligned rectangle [x0, x1] x [y0, y1].
struct Rect {
  double x0 = 0.0;
  double y0 = 0.0;
  double x1 = 0.0;
  double y1 = 0.0;

  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
  double area() const { return width() * height(); }

  /// Area of the intersection; touching edges give zero.
  double overlap_area(const Rect& o) const {
    const double w = std::min(x1, o.x1) - std::max(x0, o.x0);
    const double h = std::min(y1, o.y1) - std::max(y0, o.y0);
    return (w > 0.0 && h > 0.0) ? w * h : 0.0;
  }
};

/// Pin bounding box of a net. Starts empty (lo = +inf, hi = -inf).
struct Box {
  double lo_x = std::numeric_limits<double>::infinity();
  double hi_x = -std::numeric_limits<double>::infinity();
  double lo_y = std::numeric_limits<double>::infinity();
  double hi_y = -std::numeric_limits<double>::infinity();

  bool empty() const { return lo_x > hi_x; }

  void add(double x, double y) {
    lo_x = std::min(lo_x, x);
    hi_x = std::max(hi_x, x);
    lo_y = std::min(lo_y, y);
    hi_y = std::max(hi_y, y);
  }

  void add(const Box& o) {
    if (o.empty()) return;
    lo_x = std::min(lo_x, o.lo_x);
    hi_x = std::max(hi_x, o.hi_x);
    lo_y = std::min(lo_y, o.lo_y);
    hi_y = std::max(hi_y, o.hi_y);
  }

  double half_perimeter() const {
    return empty() ? 0.0 : (hi_x - lo_x) + (hi_y - lo_y);
  }
};

/// Grid cell coordinates: column i along x, row j along y.
struct GridIndex {
  std::int32_t i = 0;
  std::int32_t j = 0;

  friend bool operator==(const GridIndex&, const GridIndex&) = default;
};

/// Raised when a caller breaks a documented precondition.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Search point of the optimizers: (x_1, y_1, ..., x_k, y_k) in canvas
/// coordinates, indexed like Netlist::macro_ids.
class Genotype {
 public:
  Genotype() = default;
  explicit Genotype(std::size_t macro_count) : coords_(2 * macro_count, 0.0) {}
  explicit Genotype(std::vector<double> coords) : coords_(std::move(coords)) {
    if (coords_.size() % 2 != 0) {
      throw ContractViolation("genotype must hold an even number of coordinates");
    }
  }

  std::size_t macro_count() const { return coords_.size() / 2; }
  Point at(std::size_t macro) const { return {coords_[2 * macro], coords_[2 * macro + 1]}; }
  void set(std::size_t macro, Point p) {
    coords_[2 * macro] = p.x;
    coords_[2 * macro + 1] = p.y;
  }

  const std::vector<double>& coords() const { return coords_; }
  std::vector<double>& coords() { return coords_; }

  friend bool operator==(const Genotype&, const Genotype&) = default;

 private:
  std::vector<double> coords_;
};

}  // namespace wiremask
