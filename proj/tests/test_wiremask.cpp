#include <doctest.h>

#include <set>
#include <thread>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "wiremask/bookshelf.hpp"
#include "wiremask/optimizers.hpp"

using namespace wiremask;

namespace {

double connected_area_key(const Netlist& nl, std::uint32_t macro) {
  std::set<std::uint32_t> cells{nl.macro_ids()[macro]};
  for (const Net& n : nl.nets()) {
    bool has = false;
    for (const PinRef& p : n.pins) has |= p.cell == nl.macro_ids()[macro];
    if (!has) continue;
    for (const PinRef& p : n.pins) cells.insert(p.cell);
  }
  double a = 0.0;
  for (std::uint32_t c : cells) a += nl.cells()[c].width * nl.cells()[c].height;
  return a;
}

}  // namespace

TEST_CASE("fig3 toy: increments 6, 3, 2 and total 11") {
  const Netlist nl = parse_aux(fixture::fig3_aux());
  const GridSpec g(5, nl);
  const MacroOrder order = order_macros(nl);
  CHECK(order.sequence == std::vector<std::uint32_t>{0, 1, 2});
  const Genotype x = read_placement(fixture::data("fig3/fig3.pl"), nl).genotype;
  const Placement p = evaluate(x, nl, g, order);
  REQUIRE(p.feasible);
  CHECK(p.increments == std::vector<double>{6.0, 3.0, 2.0});
  CHECK(p.hpwl == 11.0);
  CHECK(hpwl_full(p.positions, nl) == 11.0);
  CHECK(p.anchors[0] == GridIndex{2, 2});
  const auto check = oracle::check_greedy(nl, g, order, x, p, false);
  CHECK_MESSAGE(check.violations == 0, check.first);
}

TEST_CASE("connected-area ordering on an equal-area hub toy") {
  // Indexed B, C, A: A is the hub, B and C tie and keep index order.
  NetlistBuilder b;
  const auto B = b.add_macro("B", 2, 2);
  const auto C = b.add_macro("C", 2, 2);
  const auto A = b.add_macro("A", 2, 2);
  b.add_net("ab", {{A, 0, 0}, {B, 0, 0}});
  b.add_net("ac", {{A, 0, 0}, {C, 0, 0}});
  b.set_canvas({0, 0, 10, 10});
  const Netlist nl = std::move(b).build();
  CHECK(order_macros(nl).sequence == std::vector<std::uint32_t>{2, 0, 1});
}

TEST_CASE("size-only ordering sorts by area") {
  NetlistBuilder b;
  b.add_macro("a", 2, 2);
  b.add_macro("b", 3, 3);
  b.add_macro("c", 1, 1);
  b.set_canvas({0, 0, 10, 10});
  const Netlist nl = std::move(b).build();
  const MacroOrder o = order_macros(nl, OrderingStrategy::kSizeOnly);
  std::vector<double> areas;
  for (auto i : o.sequence) areas.push_back(nl.macro_size(i).width * nl.macro_size(i).height);
  CHECK(areas == std::vector<double>{9, 4, 1});
}

TEST_CASE("orderings are permutations; connected-area keys are non-increasing") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const auto inst = oracle::random_instance(rng);
    const Netlist& nl = inst.netlist;
    for (auto s : {OrderingStrategy::kConnectedArea, OrderingStrategy::kSizeOnly, OrderingStrategy::kRandom}) {
      Rng r1(trial), r2(trial);
      const MacroOrder o = order_macros(nl, s, r1);
      std::vector<std::uint32_t> sorted = o.sequence;
      std::sort(sorted.begin(), sorted.end());
      std::vector<std::uint32_t> iota(nl.macro_count());
      std::iota(iota.begin(), iota.end(), 0u);
      CHECK(sorted == iota);
      CHECK(order_macros(nl, s, r2).sequence == o.sequence);
      if (s == OrderingStrategy::kConnectedArea) {
        for (std::size_t i = 1; i < o.sequence.size(); ++i) {
          const double a = connected_area_key(nl, o.sequence[i - 1]);
          const double b = connected_area_key(nl, o.sequence[i]);
          CHECK(a >= b);
          if (a == b) CHECK(o.sequence[i - 1] < o.sequence[i]);
        }
      }
    }
  }
}

TEST_CASE("greedy steps match the brute-force wire-mask oracle") {
  std::mt19937_64 rng(6);
  std::size_t feasible = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const auto inst = oracle::random_instance(rng);
    const GridSpec g(inst.m, inst.netlist);
    const bool exact = trial % 4 == 3;
    const MacroOrder order = order_macros(inst.netlist);
    Rng grng(trial);
    Genotype x = random_genotype(inst.netlist, grng);
    // Snap some coordinates onto grid corners to provoke distance ties.
    if (trial % 2 == 0) {
      for (std::size_t i = 0; i < x.macro_count(); ++i) {
        x.set(i, g.corner({static_cast<int>(grng() % inst.m), static_cast<int>(grng() % inst.m)}));
      }
    }
    const Placement p = evaluate(x, inst.netlist, g, order,
                                 {exact ? OverlapMode::kExact : OverlapMode::kConservative});
    const auto check = oracle::check_greedy(inst.netlist, g, order, x, p, exact);
    REQUIRE_MESSAGE(check.violations == 0, check.first);
    if (p.feasible) {
      ++feasible;
      CHECK(oracle::close_relative(p.hpwl, hpwl_full(p.positions, inst.netlist), 1e-12));
      for (std::size_t i = 0; i < p.anchors.size(); ++i) CHECK(p.positions[i] == g.corner(p.anchors[i]));
    }
  }
  CHECK(feasible > 200);
}

TEST_CASE("wire-mask values are non-negative where valid") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    const auto inst = oracle::random_instance(rng, {.integer = false});
    const GridSpec g(inst.m, inst.netlist);
    const EvalModel model(inst.netlist);
    std::vector<Box> boxes = model.fixed_boxes();
    Occupancy occ(g);
    // Partially populate the boxes with the first macro at a random corner.
    if (occ.is_valid(model.size(0), {0, 0})) {
      occ.commit(0, model.size(0), {0, 0});
      for (const MacroNetPins& e : model.nets_of(0)) {
        boxes[e.net].add(g.x_of(0) + e.lo_x, g.y_of(0) + e.lo_y);
        boxes[e.net].add(g.x_of(0) + e.hi_x, g.y_of(0) + e.hi_y);
      }
    }
    const std::uint32_t q = static_cast<std::uint32_t>(model.macro_count() - 1);
    const WireMask w = wire_mask(model, q, boxes, occ, g);
    for (int j = 0; j < g.m(); ++j) {
      for (int i = 0; i < g.m(); ++i) {
        if (w.is_valid({i, j})) CHECK(w.at({i, j}) >= 0.0);
      }
    }
  }
}

TEST_CASE("infeasible and malformed inputs") {
  NetlistBuilder b;
  b.add_macro("a", 3, 3);
  b.add_macro("b", 3, 3);
  b.set_canvas({0, 0, 5, 5});
  const Netlist nl = std::move(b).build();
  const GridSpec g(5, nl);
  const Placement p = evaluate(Genotype(std::vector<double>{0, 0, 4, 4}), nl, g, order_macros(nl));
  CHECK_FALSE(p.feasible);
  CHECK(std::isinf(p.hpwl));
  CHECK_THROWS_AS(evaluate(Genotype(1), nl, g, order_macros(nl)), ContractViolation);
  CHECK_THROWS_AS(Genotype(std::vector<double>{1, 2, 3}), ContractViolation);
}

TEST_CASE("out-of-canvas genotypes map like their clamped copies") {
  const Netlist nl = parse_aux(fixture::fig3_aux());
  const GridSpec g(5, nl);
  const Genotype far(std::vector<double>{-40, 90, 1e9, -3, 2, 2});
  const Genotype clamped(std::vector<double>{0, 5, 5, 0, 2, 2});
  CHECK(evaluate(far, nl, g, order_macros(nl)).anchors == evaluate(clamped, nl, g, order_macros(nl)).anchors);
}

TEST_CASE("concurrent evaluations agree with serial ones") {
  std::mt19937_64 rng(9);
  const auto inst = oracle::random_instance(rng, {.max_macros = 6, .max_partitions = 30, .integer = false});
  const GridSpec g(inst.m, inst.netlist);
  const Evaluator ev(inst.netlist, g, order_macros(inst.netlist));
  std::vector<Genotype> xs;
  Rng grng(1);
  for (int i = 0; i < 64; ++i) xs.push_back(random_genotype(inst.netlist, grng));
  std::vector<Placement> serial, parallel(xs.size());
  for (const auto& x : xs) serial.push_back(ev.evaluate(x));
  {
    std::vector<std::jthread> pool;
    for (int t = 0; t < 4; ++t) {
      pool.emplace_back([&, t] {
        for (std::size_t i = t; i < xs.size(); i += 4) parallel[i] = ev.evaluate(xs[i]);
      });
    }
  }
  for (std::size_t i = 0; i < xs.size(); ++i) {
    CHECK(serial[i].anchors == parallel[i].anchors);
    CHECK(serial[i].feasible == parallel[i].feasible);
  }
}
