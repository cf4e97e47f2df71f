#include "wiremask/netlist.hpp"

#include <stdexcept>

namespace wiremask {

std::optional<std::uint32_t> Netlist::find_cell(std::string_view name) const {
  auto it = by_name_.find(std::string(name));
  if (it == by_name_.end()) return std::nullopt;
  return it->second;
}

NetlistBuilder::NetlistBuilder(std::string name) { net_.name_ = std::move(name); }

std::uint32_t NetlistBuilder::add_cell(std::string name, double width, double height, CellKind kind) {
  if (width < 0.0 || height < 0.0) {
    throw std::invalid_argument("cell '" + name + "' has a negative dimension");
  }
  if (kind == CellKind::kMacro && !(width > 0.0 && height > 0.0)) {
    throw std::invalid_argument("zero-area macro '" + name + "'");
  }
  const auto id = static_cast<std::uint32_t>(net_.cells_.size());
  if (!net_.by_name_.emplace(name, id).second) {
    throw std::invalid_argument("duplicate cell name '" + name + "'");
  }
  net_.macro_index_of_.push_back(Netlist::kNotMacro);
  if (kind == CellKind::kMacro) {
    net_.macro_index_of_[id] = static_cast<std::uint32_t>(net_.macro_ids_.size());
    net_.macro_ids_.push_back(id);
  }
  net_.cells_.push_back({std::move(name), width, height, kind});
  return id;
}

void NetlistBuilder::add_net(std::string name, std::vector<PinRef> pins, std::vector<Point> fixed_pins) {
  const std::uint32_t id = next_net_id_++;
  Net n;
  n.id = id;
  n.name = std::move(name);
  for (PinRef p : pins) {
    if (p.cell >= net_.cells_.size()) {
      throw std::invalid_argument("net '" + n.name + "' references an unknown cell");
    }
    const CellRecord& c = net_.cells_[p.cell];
    if (c.kind != CellKind::kMacro) continue;
    const double ox = std::clamp(p.offset_x, 0.0, c.width);
    const double oy = std::clamp(p.offset_y, 0.0, c.height);
    if (ox != p.offset_x || oy != p.offset_y) ++net_.clamped_pin_offsets_;
    n.pins.push_back({p.cell, ox, oy});
  }
  if (n.pins.empty()) return;
  n.fixed_pins = std::move(fixed_pins);
  net_.nets_.push_back(std::move(n));
}

void NetlistBuilder::set_canvas(Rect canvas) {
  net_.canvas_ = canvas;
  canvas_set_ = true;
}

void NetlistBuilder::add_passthrough(std::uint32_t cell, std::string line) {
  net_.passthrough_.push_back({cell, std::move(line)});
}

std::optional<std::uint32_t> NetlistBuilder::find_cell(std::string_view name) const {
  return net_.find_cell(name);
}

Netlist NetlistBuilder::build() && {
  if (!canvas_set_) throw std::invalid_argument("canvas extents were never set");
  if (!(net_.canvas_.width() > 0.0 && net_.canvas_.height() > 0.0)) {
    throw std::invalid_argument("canvas must have positive width and height");
  }
  return std::move(net_);
}

}  // namespace wiremask
