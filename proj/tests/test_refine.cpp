#include <doctest.h>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "wiremask/bookshelf.hpp"
#include "wiremask/optimizers.hpp"
#include "wiremask/refine.hpp"

using namespace wiremask;

TEST_CASE("fig3 phenotype does not get worse") {
  const Netlist nl = parse_aux(fixture::fig3_aux());
  const GridSpec g(5, nl);
  const MacroOrder order = order_macros(nl);
  const Placement p = evaluate(read_placement(fixture::data("fig3/fig3.pl"), nl).genotype, nl, g, order);
  LocalSearchConfig cfg;
  cfg.order = order;
  const Placement q = local_search(p, nl, g, cfg);
  CHECK(q.feasible);
  CHECK(q.hpwl <= 11.0);
}

TEST_CASE("every move matches the exhaustive relocation oracle") {
  std::mt19937_64 rng(31);
  int moved = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const auto inst = oracle::random_instance(rng, {.max_macros = 4, .max_partitions = 8});
    const GridSpec g(inst.m, inst.netlist);
    const bool exact = trial % 3 == 2;
    const MacroOrder order = order_macros(inst.netlist);
    Rng grng(trial);
    const Placement p = evaluate(random_genotype(inst.netlist, grng), inst.netlist, g, order,
                                 {exact ? OverlapMode::kExact : OverlapMode::kConservative});
    if (!p.feasible) continue;
    LocalSearchConfig cfg;
    cfg.order = order;
    cfg.rng = make_stream(trial, "tie-break");
    cfg.overlap = exact ? OverlapMode::kExact : OverlapMode::kConservative;
    std::vector<LocalSearchMove> trace;
    const Placement q = local_search(p, inst.netlist, g, cfg, &trace);
    CHECK(trace.size() == 2 * inst.netlist.macro_count());
    const auto check = oracle::check_relocations(inst.netlist, g, p, trace, exact);
    REQUIRE_MESSAGE(check.violations == 0, check.first);
    CHECK(q.hpwl <= p.hpwl);
    CHECK(q.hpwl == hpwl_full(q.positions, inst.netlist));
    CHECK(oracle::legality_violations(inst.netlist, q.positions, g.boundary_tolerance()) == 0);
    for (const auto& mv : trace) {
      CHECK(mv.hpwl_after <= mv.hpwl_before);
      moved += !(mv.from == mv.to);
    }
  }
  CHECK(moved > 50);
}

TEST_CASE("a converged placement is a fixed point") {
  std::mt19937_64 rng(32);
  for (int trial = 0; trial < 50; ++trial) {
    const auto inst = oracle::random_instance(rng, {.max_macros = 5, .max_partitions = 10, .integer = false});
    const GridSpec g(inst.m, inst.netlist);
    const MacroOrder order = order_macros(inst.netlist);
    Rng grng(trial);
    const Placement p = evaluate(random_genotype(inst.netlist, grng), inst.netlist, g, order);
    if (!p.feasible) continue;
    LocalSearchConfig cfg;
    cfg.order = order;
    cfg.passes = 50;
    const Placement converged = local_search(p, inst.netlist, g, cfg);
    cfg.passes = 2;
    std::vector<LocalSearchMove> trace;
    const Placement again = local_search(converged, inst.netlist, g, cfg, &trace);
    bool any_move = false;
    for (const auto& mv : trace) any_move |= !(mv.from == mv.to);
    if (any_move) continue;  // 50 passes were not enough; rare
    CHECK(again.anchors == converged.anchors);
    CHECK(again.hpwl == converged.hpwl);
  }
}

TEST_CASE("local search sees all macros; the greedy mapping only the earlier ones") {
  // The first placed macro has nothing to connect to yet, so the greedy
  // mapping leaves it at the genotype; relocation pulls it toward its peers.
  NetlistBuilder b;
  const auto p = b.add_macro("P", 2, 2);
  const auto q = b.add_macro("Q", 1, 1);
  const auto r = b.add_macro("R", 1, 1);
  b.add_net("pq", {{p, 1, 1}, {q, 0.5, 0.5}});
  b.add_net("pr", {{p, 1, 1}, {r, 0.5, 0.5}});
  // Q and R are held near the far corner by pads.
  for (int n = 0; n < 3; ++n) {
    b.add_net("qpad" + std::to_string(n), {{q, 0.5, 0.5}}, {{8, 8}});
    b.add_net("rpad" + std::to_string(n), {{r, 0.5, 0.5}}, {{8, 8}});
  }
  b.set_canvas({0, 0, 8, 8});
  const Netlist nl = std::move(b).build();
  const GridSpec g(8, nl);
  const MacroOrder order = order_macros(nl);
  REQUIRE(order.sequence.front() == p);
  const Placement greedy = evaluate(Genotype(std::vector<double>{0, 0, 7, 7, 7, 6}), nl, g, order);
  CHECK(greedy.anchors[p] == GridIndex{0, 0});
  LocalSearchConfig cfg;
  cfg.order = order;
  std::vector<LocalSearchMove> trace;
  local_search(greedy, nl, g, cfg, &trace);
  REQUIRE(!trace.empty());
  CHECK(trace.front().macro == p);
  CHECK_FALSE(trace.front().to == greedy.anchors[p]);
}

TEST_CASE("contract checks") {
  const Netlist nl = parse_aux(fixture::fig3_aux());
  const GridSpec g(5, nl);
  LocalSearchConfig cfg;
  cfg.order = order_macros(nl);
  CHECK_THROWS_AS(local_search(Placement{}, nl, g, cfg), ContractViolation);
  const Placement p = evaluate(read_placement(fixture::data("fig3/fig3.pl"), nl).genotype, nl, g, cfg.order);
  cfg.passes = 0;
  CHECK_THROWS_AS(local_search(p, nl, g, cfg), ContractViolation);
}
