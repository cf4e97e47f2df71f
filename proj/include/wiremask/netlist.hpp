#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "wiremask/types.hpp"

namespace wiremask {

enum class CellKind { kMacro, kStandard, kFixedTerminal };

struct CellRecord {
  std::string name;
  double width = 0.0;
  double height = 0.0;
  CellKind kind = CellKind::kStandard;
};

/// Pin on a cell; offsets are measured from the cell's bottom-left corner.
struct PinRef {
  std::uint32_t cell = 0;
  double offset_x = 0.0;
  double offset_y = 0.0;
};

/// A macro-related net. Only macro pins are kept in `pins`; pins of fixed
/// terminals are resolved to absolute positions when requested at parse time.
struct Net {
  std::uint32_t id = 0;
  std::string name;
  std::vector<PinRef> pins;
  std::vector<Point> fixed_pins;
};

/// Verbatim `.pl` line of a non-macro node, kept for pass-through on write.
struct PassthroughRecord {
  std::uint32_t cell = 0;
  std::string line;
};

/// Immutable hyper-graph of macros and macro-related nets on a canvas.
class Netlist {
 public:
  static constexpr std::uint32_t kNotMacro = 0xffffffffu;

  const std::string& name() const { return name_; }
  const std::vector<CellRecord>& cells() const { return cells_; }
  const std::vector<Net>& nets() const { return nets_; }
  const std::vector<std::uint32_t>& macro_ids() const { return macro_ids_; }
  std::size_t macro_count() const { return macro_ids_.size(); }

  const CellRecord& macro(std::size_t macro_index) const { return cells_[macro_ids_[macro_index]]; }
  Size macro_size(std::size_t macro_index) const {
    const auto& c = macro(macro_index);
    return {c.width, c.height};
  }

  /// Macro index of a cell, or kNotMacro.
  std::uint32_t macro_index_of(std::uint32_t cell) const { return macro_index_of_[cell]; }
  std::optional<std::uint32_t> find_cell(std::string_view name) const;

  /// Canvas rectangle; the origin need not be (0, 0).
  const Rect& canvas() const { return canvas_; }
  double canvas_width() const { return canvas_.width(); }
  double canvas_height() const { return canvas_.height(); }

  const std::vector<PassthroughRecord>& passthrough() const { return passthrough_; }

  /// Number of pin offsets that had to be clamped into their cell.
  std::size_t clamped_pin_offsets() const { return clamped_pin_offsets_; }

 private:
  friend class NetlistBuilder;

  std::string name_;
  std::vector<CellRecord> cells_;
  std::vector<Net> nets_;
  std::vector<std::uint32_t> macro_ids_;
  std::vector<std::uint32_t> macro_index_of_;
  std::unordered_map<std::string, std::uint32_t> by_name_;
  Rect canvas_;
  std::vector<PassthroughRecord> passthrough_;
  std::size_t clamped_pin_offsets_ = 0;
};

/// Incremental construction of a Netlist. `build` validates every invariant
/// and throws std::invalid_argument on violation.
class NetlistBuilder {
 public:
  explicit NetlistBuilder(std::string name = {});

  std::uint32_t add_cell(std::string name, double width, double height, CellKind kind);
  std::uint32_t add_macro(std::string name, double width, double height) {
    return add_cell(std::move(name), width, height, CellKind::kMacro);
  }

  /// Pins on cells that are not macros are dropped. Nets without a macro pin
  /// are discarded. Offsets outside the cell are clamped into it.
  void add_net(std::string name, std::vector<PinRef> pins, std::vector<Point> fixed_pins = {});

  void set_canvas(Rect canvas);
  void add_passthrough(std::uint32_t cell, std::string line);

  std::optional<std::uint32_t> find_cell(std::string_view name) const;
  const CellRecord& cell(std::uint32_t id) const { return net_.cells_[id]; }
  std::size_t cell_count() const { return net_.cells_.size(); }

  Netlist build() &&;

 private:
  Netlist net_;
  std::uint32_t next_net_id_ = 0;
  bool canvas_set_ = false;
};

}  // namespace wiremask
