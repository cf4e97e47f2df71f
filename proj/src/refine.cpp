#include "wiremask/refine.hpp"

#include <cmath>
#include <limits>

namespace wiremask {

Placement local_search(const Placement& placement, const Netlist& netlist, const GridSpec& grid,
                       const LocalSearchConfig& config, std::vector<LocalSearchMove>* trace) {
  if (!placement.feasible) throw ContractViolation("local search needs a feasible placement");
  if (config.passes < 1) throw ContractViolation("local search needs at least one pass");
  const std::size_t k = netlist.macro_count();
  if (placement.anchors.size() != k || config.order.sequence.size() != k) {
    throw ContractViolation("placement or order does not match the netlist");
  }

  const kernels::KernelTable& kern = config.kernels ? *config.kernels : kernels::active();
  const EvalModel model(netlist);
  Occupancy occ(grid, config.overlap, &kern);

  Placement out;
  out.anchors = placement.anchors;
  out.positions.resize(k);
  out.feasible = true;
  for (std::uint32_t i = 0; i < k; ++i) {
    out.positions[i] = grid.corner(out.anchors[i]);
    occ.commit(i, model.size(i), out.anchors[i]);
  }
  double hpwl = hpwl_full(out.positions, netlist);

  Rng rng = config.rng;
  const auto mz = static_cast<std::size_t>(grid.m());
  std::vector<Box> boxes(model.net_count());
  std::vector<std::uint8_t> valid;
  std::vector<double> row_min(mz);
  std::vector<GridIndex> ties;
  SeparableMask sep;

  for (int pass = 0; pass < config.passes; ++pass) {
    for (const std::uint32_t macro : config.order.sequence) {
      const Size size = model.size(macro);
      const GridIndex from = out.anchors[macro];
      occ.release(macro);

      for (const MacroNetPins& e : model.nets_of(macro)) {
        Box b = model.fixed_boxes()[e.net];
        for (const auto& [other, pins] : model.members(e.net)) {
          if (other == macro) continue;
          const Point& p = out.positions[other];
          b.add(p.x + pins.lo_x, p.y + pins.lo_y);
          b.add(p.x + pins.hi_x, p.y + pins.hi_y);
        }
        boxes[e.net] = b;
      }
      compute_separable_mask(model, macro, boxes, grid, kern, sep);
      occ.valid_anchors(size, valid);

      double best = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < mz; ++j) {
        row_min[j] = kern.masked_min(sep.x_cost, std::span(valid).subspan(j * mz, mz));
        if (std::isfinite(row_min[j])) best = std::min(best, row_min[j] + sep.y_cost[j]);
      }
      const double current = sep.x_cost[from.i] + sep.y_cost[from.j];

      GridIndex to = from;
      if (best < current) {
        ties.clear();
        for (std::size_t j = 0; j < mz; ++j) {
          if (!std::isfinite(row_min[j]) || row_min[j] + sep.y_cost[j] != best) continue;
          for (std::size_t i = 0; i < mz; ++i) {
            if (valid[j * mz + i] != 0 && sep.x_cost[i] + sep.y_cost[j] == best) {
              ties.push_back({static_cast<std::int32_t>(i), static_cast<std::int32_t>(j)});
            }
          }
        }
        if (ties.size() == 1) {
          to = ties.front();
        } else {
          std::uniform_int_distribution<std::size_t> pick(0, ties.size() - 1);
          to = ties[pick(rng)];
        }
      }

      occ.commit(macro, size, to);
      out.anchors[macro] = to;
      out.positions[macro] = grid.corner(to);
      const double before = hpwl;
      if (!(to == from)) hpwl = hpwl - current + best;
      if (trace) trace->push_back({macro, from, to, before, hpwl});
    }
  }
  // Unchanged placements keep the caller's value; a fresh sum in a different
  // order could differ in the last bit.
  out.hpwl = out.anchors == placement.anchors ? placement.hpwl : hpwl_full(out.positions, netlist);
  return out;
}

}  // namespace wiremask
