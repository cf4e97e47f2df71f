#pragma once

#include <vector>

#include "wiremask/evaluate.hpp"
#include "wiremask/grid.hpp"
#include "wiremask/random.hpp"

namespace wiremask {

struct LocalSearchConfig {
  int passes = 2;
  MacroOrder order;
  Rng rng{0};  // tie-break stream; copied, so one config replays identically
  OverlapMode overlap = OverlapMode::kConservative;
  const kernels::KernelTable* kernels = nullptr;
};

/// One visit of one macro during local search. `to == from` when it stayed.
struct LocalSearchMove {
  std::uint32_t macro = 0;
  GridIndex from;
  GridIndex to;
  double hpwl_before = 0.0;
  double hpwl_after = 0.0;
};

/// Best-improvement single-macro relocation passes. Each macro is lifted,
/// every admissible anchor is scored against all other macros at their
/// current positions, and the macro moves only if HPWL strictly drops; equal
/// best anchors are chosen uniformly at random. Throws ContractViolation on an
/// infeasible or illegal input.
Placement local_search(const Placement& placement, const Netlist& netlist, const GridSpec& grid,
                       const LocalSearchConfig& config, std::vector<LocalSearchMove>* trace = nullptr);

}  // namespace wiremask
