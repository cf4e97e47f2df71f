#include "wiremask/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace wiremask {

OrderingStrategy parse_ordering(std::string_view text) {
  if (text == "connected-area") return OrderingStrategy::kConnectedArea;
  if (text == "size-only") return OrderingStrategy::kSizeOnly;
  if (text == "random") return OrderingStrategy::kRandom;
  throw std::invalid_argument("unknown ordering strategy '" + std::string(text) + "'");
}

std::string_view to_string(OrderingStrategy s) {
  switch (s) {
    case OrderingStrategy::kConnectedArea: return "connected-area";
    case OrderingStrategy::kSizeOnly: return "size-only";
    case OrderingStrategy::kRandom: return "random";
  }
  return "?";
}

Point clamp_to_canvas(Point p, const Rect& canvas) {
  return {std::clamp(p.x, canvas.x0, canvas.x1), std::clamp(p.y, canvas.y0, canvas.y1)};
}

EvalModel::EvalModel(const Netlist& netlist) : netlist_(&netlist) {
  const std::size_t k = netlist.macro_count();
  sizes_.reserve(k);
  for (std::size_t i = 0; i < k; ++i) sizes_.push_back(netlist.macro_size(i));

  const auto& nets = netlist.nets();
  net_begin_.reserve(nets.size() + 1);
  net_begin_.push_back(0);
  fixed_boxes_.resize(nets.size());
  std::vector<std::pair<std::uint32_t, PinRef>> pins;
  for (std::size_t n = 0; n < nets.size(); ++n) {
    for (const Point& p : nets[n].fixed_pins) fixed_boxes_[n].add(p.x, p.y);

    pins.clear();
    for (const PinRef& p : nets[n].pins) pins.emplace_back(netlist.macro_index_of(p.cell), p);
    std::stable_sort(pins.begin(), pins.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t a = 0; a < pins.size();) {
      const std::uint32_t macro = pins[a].first;
      MacroNetPins e{static_cast<std::uint32_t>(n), pins[a].second.offset_x, pins[a].second.offset_x,
                     pins[a].second.offset_y, pins[a].second.offset_y};
      std::size_t b = a + 1;
      for (; b < pins.size() && pins[b].first == macro; ++b) {
        e.lo_x = std::min(e.lo_x, pins[b].second.offset_x);
        e.hi_x = std::max(e.hi_x, pins[b].second.offset_x);
        e.lo_y = std::min(e.lo_y, pins[b].second.offset_y);
        e.hi_y = std::max(e.hi_y, pins[b].second.offset_y);
      }
      members_.emplace_back(macro, e);
      a = b;
    }
    net_begin_.push_back(members_.size());
  }

  std::vector<std::size_t> count(k + 1, 0);
  for (const auto& [macro, e] : members_) ++count[macro + 1];
  std::partial_sum(count.begin(), count.end(), count.begin());
  macro_begin_ = count;
  entries_.resize(members_.size());
  for (const auto& [macro, e] : members_) entries_[count[macro]++] = e;
}

MacroOrder order_macros(const Netlist& netlist, OrderingStrategy strategy) {
  Rng unused(0);
  return order_macros(netlist, strategy, unused);
}

MacroOrder order_macros(const Netlist& netlist, OrderingStrategy strategy, Rng& rng) {
  const std::size_t k = netlist.macro_count();
  MacroOrder order;
  order.strategy = strategy;
  order.sequence.resize(k);
  std::iota(order.sequence.begin(), order.sequence.end(), 0u);

  if (strategy == OrderingStrategy::kRandom) {
    std::shuffle(order.sequence.begin(), order.sequence.end(), rng);
    return order;
  }

  auto area = [&](std::size_t i) {
    const Size s = netlist.macro_size(i);
    return s.width * s.height;
  };
  std::vector<double> key(k, 0.0);
  if (strategy == OrderingStrategy::kSizeOnly) {
    for (std::size_t i = 0; i < k; ++i) key[i] = area(i);
  } else {
    const EvalModel model(netlist);
    std::vector<std::uint32_t> stamp(k, 0xffffffffu);
    for (std::uint32_t v = 0; v < k; ++v) {
      stamp[v] = v;
      double total = area(v);
      for (const MacroNetPins& e : model.nets_of(v)) {
        for (const auto& [other, pins] : model.members(e.net)) {
          if (stamp[other] == v) continue;
          stamp[other] = v;
          total += area(other);
        }
      }
      key[v] = total;
    }
  }
  std::stable_sort(order.sequence.begin(), order.sequence.end(),
                   [&](std::uint32_t a, std::uint32_t b) { return key[a] > key[b]; });
  return order;
}

void compute_separable_mask(const EvalModel& model, std::uint32_t macro, std::span<const Box> boxes,
                            const GridSpec& grid, const kernels::KernelTable& kernels,
                            SeparableMask& out) {
  const auto m = static_cast<std::size_t>(grid.m());
  out.x_cost.assign(m, 0.0);
  out.y_cost.assign(m, 0.0);
  out.constant = 0.0;
  const double x0 = grid.canvas().x0;
  const double y0 = grid.canvas().y0;
  for (const MacroNetPins& e : model.nets_of(macro)) {
    const Box& b = boxes[e.net];
    if (b.empty()) {
      out.constant += (e.hi_x - e.lo_x) + (e.hi_y - e.lo_y);
      continue;
    }
    kernels.accumulate_expansion(out.x_cost, x0, grid.cell_w(), e.lo_x, e.hi_x, b.lo_x, b.hi_x);
    kernels.accumulate_expansion(out.y_cost, y0, grid.cell_h(), e.lo_y, e.hi_y, b.lo_y, b.hi_y);
  }
}

WireMask wire_mask(const EvalModel& model, std::uint32_t macro, std::span<const Box> boxes,
                   const Occupancy& occ, const GridSpec& grid, const kernels::KernelTable& kernels) {
  WireMask w;
  w.m = grid.m();
  occ.valid_anchors(model.size(macro), w.valid);
  SeparableMask sep;
  compute_separable_mask(model, macro, boxes, grid, kernels, sep);
  w.delta.resize(grid.cell_count());
  kernels.outer_sum(sep.x_cost, sep.y_cost, sep.constant, w.delta);
  return w;
}

Evaluator::Evaluator(const Netlist& netlist, const GridSpec& grid, MacroOrder order,
                     EvaluatorOptions options)
    : model_(netlist), grid_(grid), order_(std::move(order)), options_(options) {
  if (order_.sequence.size() != netlist.macro_count()) {
    throw ContractViolation("macro order does not cover every macro");
  }
  if (!options_.kernels) options_.kernels = &kernels::active();
}

Placement Evaluator::evaluate(const Genotype& genotype) const {
  const std::size_t k = model_.macro_count();
  if (genotype.macro_count() != k) {
    throw ContractViolation("genotype holds " + std::to_string(genotype.macro_count()) +
                            " macros, netlist has " + std::to_string(k));
  }
  const kernels::KernelTable& kern = *options_.kernels;
  const auto mz = static_cast<std::size_t>(grid_.m());

  Placement out;
  out.anchors.assign(k, GridIndex{-1, -1});
  out.positions.resize(k);
  for (std::size_t i = 0; i < k; ++i) out.positions[i] = clamp_to_canvas(genotype.at(i), grid_.canvas());
  out.increments.reserve(k);

  Occupancy occ(grid_, options_.overlap, &kern);
  std::vector<Box> boxes = model_.fixed_boxes();
  double f = 0.0;
  for (const Box& b : boxes) f += b.half_perimeter();

  std::vector<std::uint8_t> valid;
  std::vector<double> row_min(mz);
  SeparableMask sep;

  for (const std::uint32_t macro : order_.sequence) {
    const Size size = model_.size(macro);
    if (occ.valid_anchors(size, valid) == 0) {
      out.feasible = false;
      out.hpwl = std::numeric_limits<double>::infinity();
      return out;
    }
    compute_separable_mask(model_, macro, boxes, grid_, kern, sep);

    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < mz; ++j) {
      row_min[j] = kern.masked_min(sep.x_cost, std::span(valid).subspan(j * mz, mz));
      if (std::isfinite(row_min[j])) best = std::min(best, row_min[j] + sep.y_cost[j]);
    }

    // Among the minimum-increment anchors take the one nearest the genotype
    // coordinate; equal distances keep the first in (row, column) order.
    const Point target = out.positions[macro];
    GridIndex chosen{-1, -1};
    double chosen_d2 = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < mz; ++j) {
      if (!std::isfinite(row_min[j]) || row_min[j] + sep.y_cost[j] != best) continue;
      const double yj = sep.y_cost[j];
      const double dy = grid_.y_of(static_cast<int>(j)) - target.y;
      const std::uint8_t* vrow = valid.data() + j * mz;
      for (std::size_t i = 0; i < mz; ++i) {
        if (vrow[i] == 0 || sep.x_cost[i] + yj != best) continue;
        const double dx = grid_.x_of(static_cast<int>(i)) - target.x;
        const double d2 = dx * dx + dy * dy;
        if (d2 < chosen_d2) {
          chosen_d2 = d2;
          chosen = {static_cast<std::int32_t>(i), static_cast<std::int32_t>(j)};
        }
      }
    }

    const double increment = best + sep.constant;
    f += increment;
    out.increments.push_back(increment);
    occ.commit(macro, size, chosen);
    const Point pos = grid_.corner(chosen);
    out.anchors[macro] = chosen;
    out.positions[macro] = pos;
    for (const MacroNetPins& e : model_.nets_of(macro)) {
      boxes[e.net].add(pos.x + e.lo_x, pos.y + e.lo_y);
      boxes[e.net].add(pos.x + e.hi_x, pos.y + e.hi_y);
    }
  }
  out.hpwl = f;
  out.feasible = true;
  return out;
}

Placement evaluate(const Genotype& genotype, const Netlist& netlist, const GridSpec& grid,
                   const MacroOrder& order, EvaluatorOptions options) {
  return Evaluator(netlist, grid, order, options).evaluate(genotype);
}

double hpwl_full(std::span<const Point> positions, const Netlist& netlist) {
  if (positions.size() != netlist.macro_count()) {
    throw ContractViolation("hpwl_full needs one position per macro");
  }
  double total = 0.0;
  for (const Net& net : netlist.nets()) {
    Box b;
    for (const Point& p : net.fixed_pins) b.add(p.x, p.y);
    for (const PinRef& pin : net.pins) {
      const Point& at = positions[netlist.macro_index_of(pin.cell)];
      b.add(at.x + pin.offset_x, at.y + pin.offset_y);
    }
    total += b.half_perimeter();
  }
  return total;
}

}  // namespace wiremask
