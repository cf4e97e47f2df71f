#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string_view>
#include <vector>

#include "wiremask/grid.hpp"
#include "wiremask/kernels.hpp"
#include "wiremask/netlist.hpp"
#include "wiremask/random.hpp"
#include "wiremask/types.hpp"

namespace wiremask {

enum class OrderingStrategy { kConnectedArea, kSizeOnly, kRandom };

OrderingStrategy parse_ordering(std::string_view text);
std::string_view to_string(OrderingStrategy s);

struct MacroOrder {
  std::vector<std::uint32_t> sequence;
  OrderingStrategy strategy = OrderingStrategy::kConnectedArea;
};

/// Connected-area key: total area of the distinct cells sharing a net with the
/// macro, the macro included. Sorted non-increasing, ties by macro index.
MacroOrder order_macros(const Netlist& netlist, OrderingStrategy strategy, Rng& rng);
MacroOrder order_macros(const Netlist& netlist, OrderingStrategy strategy = OrderingStrategy::kConnectedArea);

/// Legalized, grid-anchored phenotype of a genotype.
struct Placement {
  std::vector<GridIndex> anchors;    // by macro index
  std::vector<Point> positions;      // by macro index, bottom-left corners
  std::vector<double> increments;    // HPWL increment of each step, in placement order
  double hpwl = std::numeric_limits<double>::infinity();
  bool feasible = false;
};

/// HPWL increment of anchoring one macro at every grid cell, given the pin
/// boxes of the nets so far. Row-major (row j, column i).
struct WireMask {
  int m = 0;
  std::vector<double> delta;
  std::vector<std::uint8_t> valid;

  double at(GridIndex g) const { return delta[static_cast<std::size_t>(g.j) * m + g.i]; }
  bool is_valid(GridIndex g) const { return valid[static_cast<std::size_t>(g.j) * m + g.i] != 0; }
};

/// Pins of one macro on one net, reduced to their offset extremes.
struct MacroNetPins {
  std::uint32_t net = 0;
  double lo_x = 0.0;
  double hi_x = 0.0;
  double lo_y = 0.0;
  double hi_y = 0.0;
};

/// Flattened, read-only view of a netlist used by evaluation and refinement.
class EvalModel {
 public:
  explicit EvalModel(const Netlist& netlist);

  const Netlist& netlist() const { return *netlist_; }
  std::size_t macro_count() const { return sizes_.size(); }
  std::size_t net_count() const { return fixed_boxes_.size(); }
  Size size(std::size_t macro) const { return sizes_[macro]; }

  std::span<const MacroNetPins> nets_of(std::size_t macro) const {
    return {entries_.data() + macro_begin_[macro], entries_.data() + macro_begin_[macro + 1]};
  }
  /// (macro, pins) members of a net.
  std::span<const std::pair<std::uint32_t, MacroNetPins>> members(std::size_t net) const {
    return {members_.data() + net_begin_[net], members_.data() + net_begin_[net + 1]};
  }
  /// Box of the fixed pins of each net (empty without fixed pins).
  const std::vector<Box>& fixed_boxes() const { return fixed_boxes_; }

 private:
  const Netlist* netlist_;
  std::vector<Size> sizes_;
  std::vector<std::size_t> macro_begin_;
  std::vector<MacroNetPins> entries_;
  std::vector<std::size_t> net_begin_;
  std::vector<std::pair<std::uint32_t, MacroNetPins>> members_;
  std::vector<Box> fixed_boxes_;
};

/// Per-axis expansion costs of a macro against the current net boxes. The
/// mask value at (i, j) is (x_cost[i] + y_cost[j]) + constant.
struct SeparableMask {
  std::vector<double> x_cost;
  std::vector<double> y_cost;
  double constant = 0.0;
};

void compute_separable_mask(const EvalModel& model, std::uint32_t macro, std::span<const Box> boxes,
                            const GridSpec& grid, const kernels::KernelTable& kernels,
                            SeparableMask& out);

WireMask wire_mask(const EvalModel& model, std::uint32_t macro, std::span<const Box> boxes,
                   const Occupancy& occ, const GridSpec& grid,
                   const kernels::KernelTable& kernels = kernels::active());

struct EvaluatorOptions {
  OverlapMode overlap = OverlapMode::kConservative;
  const kernels::KernelTable* kernels = nullptr;  // nullptr: kernels::active()
};

/// Genotype-to-phenotype mapping with greedy wire-mask legalization.
/// `evaluate` is const and safe to call from many threads at once.
class Evaluator {
 public:
  Evaluator(const Netlist& netlist, const GridSpec& grid, MacroOrder order,
            EvaluatorOptions options = {});

  Placement evaluate(const Genotype& genotype) const;

  const EvalModel& model() const { return model_; }
  const GridSpec& grid() const { return grid_; }
  const MacroOrder& order() const { return order_; }
  const Netlist& netlist() const { return model_.netlist(); }
  const EvaluatorOptions& options() const { return options_; }

 private:
  EvalModel model_;
  GridSpec grid_;
  MacroOrder order_;
  EvaluatorOptions options_;
};

Placement evaluate(const Genotype& genotype, const Netlist& netlist, const GridSpec& grid,
                   const MacroOrder& order, EvaluatorOptions options = {});

/// Closed-form HPWL: sum over nets of the pin bounding box half-perimeter.
double hpwl_full(std::span<const Point> positions, const Netlist& netlist);

/// Coordinates clamped onto the canvas.
Point clamp_to_canvas(Point p, const Rect& canvas);

}  // namespace wiremask
