#include <doctest.h>

#include <numeric>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "wiremask/bookshelf.hpp"
#include "wiremask/optimizers.hpp"
#include "wiremask/metrics.hpp"

using namespace wiremask;

namespace {

Placement at_positions(std::vector<Point> pos) {
  Placement p;
  p.positions = std::move(pos);
  p.feasible = true;
  return p;
}

double sum(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

// Sum of (w + h) over nets whose pin box has positive width and height.
double nondegenerate_hpwl(const Netlist& nl, const std::vector<Point>& pos) {
  double total = 0.0;
  for (const Net& n : nl.nets()) {
    Box b;
    for (const Point& f : n.fixed_pins) b.add(f.x, f.y);
    for (const PinRef& p : n.pins) {
      const Point& at = pos[nl.macro_index_of(p.cell)];
      b.add(at.x + p.offset_x, at.y + p.offset_y);
    }
    if (!b.empty() && b.hi_x > b.lo_x && b.hi_y > b.lo_y) total += b.half_perimeter();
  }
  return total;
}

}  // namespace

TEST_CASE("a net spanning exactly one cell marks only that cell") {
  NetlistBuilder b;
  const auto a = b.add_macro("a", 2, 2);
  b.add_net("n", {{a, 0, 0}, {a, 2, 2}});
  b.set_canvas({0, 0, 10, 10});
  const Netlist nl = std::move(b).build();
  const GridSpec g(5, nl);
  const CongestionMap map = congestion(at_positions({{4, 6}}), nl, g);
  for (int j = 0; j < 5; ++j) {
    for (int i = 0; i < 5; ++i) {
      const double expect = (i == 2 && j == 3) ? (2.0 + 2.0) / (2.0 * 2.0) : 0.0;
      CHECK(map.values[g.flat({i, j})] == expect);
    }
  }
  CHECK(map.rudy == doctest::Approx(1.0 / 3.0));  // ceil(2.5) = 3 cells
}

TEST_CASE("no nets gives an all-zero map") {
  NetlistBuilder b;
  b.add_macro("a", 1, 1);
  b.set_canvas({0, 0, 4, 4});
  const Netlist nl = std::move(b).build();
  const CongestionMap map = congestion(at_positions({{0, 0}}), nl, GridSpec(4, nl));
  CHECK(sum(map.values) == 0.0);
  CHECK(map.rudy == 0.0);
  CHECK_THROWS_AS(congestion(Placement{}, nl, GridSpec(4, nl)), ContractViolation);
}

TEST_CASE("top decile takes ceil(n / 10) entries") {
  CHECK(top_decile_mean({}) == 0.0);
  CHECK(top_decile_mean({3, 1, 2}) == 3.0);
  std::vector<double> v(25);
  std::iota(v.begin(), v.end(), 1.0);
  CHECK(top_decile_mean(v) == doctest::Approx((25.0 + 24.0 + 23.0) / 3.0));
}

TEST_CASE("area-weighted congestion integrates to the non-degenerate HPWL") {
  std::mt19937_64 rng(12);
  int checked = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto inst = oracle::random_instance(rng, {.max_macros = 6, .max_partitions = 16, .integer = false});
    const GridSpec g(inst.m, inst.netlist);
    Rng grng(trial);
    const Placement p = evaluate(random_genotype(inst.netlist, grng), inst.netlist, g,
                                 order_macros(inst.netlist));
    if (!p.feasible) continue;
    ++checked;
    const CongestionMap map = congestion(p, inst.netlist, g, CongestionMode::kAreaWeighted);
    const double integrated = sum(map.values) * g.cell_w() * g.cell_h();
    // Degenerate nets contribute their widened box; remove them first.
    NetlistBuilder only;
    for (std::size_t i = 0; i < inst.netlist.macro_count(); ++i) {
      only.add_macro(inst.netlist.macro(i).name, inst.netlist.macro(i).width, inst.netlist.macro(i).height);
    }
    for (const Net& n : inst.netlist.nets()) {
      Box b;
      for (const Point& f : n.fixed_pins) b.add(f.x, f.y);
      for (const PinRef& pin : n.pins) {
        const Point& at = p.positions[inst.netlist.macro_index_of(pin.cell)];
        b.add(at.x + pin.offset_x, at.y + pin.offset_y);
      }
      if (!(b.hi_x > b.lo_x && b.hi_y > b.lo_y)) continue;
      std::vector<PinRef> pins;
      for (const PinRef& pin : n.pins) {
        pins.push_back({static_cast<std::uint32_t>(inst.netlist.macro_index_of(pin.cell)), pin.offset_x,
                        pin.offset_y});
      }
      only.add_net(n.name, pins, n.fixed_pins);
    }
    only.set_canvas(inst.netlist.canvas());
    const Netlist filtered = std::move(only).build();
    const double lhs =
        sum(congestion(p, filtered, g, CongestionMode::kAreaWeighted).values) * g.cell_w() * g.cell_h();
    const double rhs = nondegenerate_hpwl(inst.netlist, p.positions);
    CHECK(oracle::close_relative(lhs, rhs, 1e-9));
    CHECK(integrated >= lhs * (1 - 1e-12));
    for (double v : map.values) CHECK(v >= 0.0);
  }
  CHECK(checked > 100);
}

TEST_CASE("covered mode matches a brute-force positive-area cover") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    const auto inst = oracle::random_instance(rng, {.integer = trial % 2 == 0});
    const GridSpec g(inst.m, inst.netlist);
    Rng grng(trial);
    const Placement p = evaluate(random_genotype(inst.netlist, grng), inst.netlist, g,
                                 order_macros(inst.netlist));
    if (!p.feasible) continue;
    std::vector<double> expect(g.cell_count(), 0.0);
    for (const Net& n : inst.netlist.nets()) {
      Box b;
      for (const Point& f : n.fixed_pins) b.add(f.x, f.y);
      for (const PinRef& pin : n.pins) {
        const Point& at = p.positions[inst.netlist.macro_index_of(pin.cell)];
        b.add(at.x + pin.offset_x, at.y + pin.offset_y);
      }
      Rect r{b.lo_x, b.lo_y, b.hi_x, b.hi_y};
      if (r.width() == 0.0) { r.x0 -= g.cell_w() / 2; r.x1 += g.cell_w() / 2; }
      if (r.height() == 0.0) { r.y0 -= g.cell_h() / 2; r.y1 += g.cell_h() / 2; }
      const double impact = (r.width() + r.height()) / (r.width() * r.height());
      for (int j = 0; j < g.m(); ++j) {
        for (int i = 0; i < g.m(); ++i) {
          const Rect cell{g.x_of(i), g.y_of(j), i + 1 == g.m() ? g.canvas().x1 : g.x_of(i + 1),
                          j + 1 == g.m() ? g.canvas().y1 : g.y_of(j + 1)};
          if (cell.overlap_area(r) > 0.0) expect[g.flat({i, j})] += impact;
        }
      }
    }
    const CongestionMap map = congestion(p, inst.netlist, g);
    for (std::size_t c = 0; c < expect.size(); ++c) {
      REQUIRE(map.values[c] == doctest::Approx(expect[c]).epsilon(1e-12));
    }
    CHECK(map.rudy == doctest::Approx(top_decile_mean(map.values)));
  }
}

TEST_CASE("scaling coordinates scales hpwl and keeps the congestion ranking") {
  const Netlist nl = parse_aux(fixture::fig3_aux());
  const GridSpec g(5, nl);
  const Placement p = evaluate(read_placement(fixture::data("fig3/fig3.pl"), nl).genotype, nl, g,
                               order_macros(nl));
  const double c = 4.0;
  NetlistBuilder b;
  for (std::size_t i = 0; i < nl.macro_count(); ++i) b.add_macro(nl.macro(i).name, nl.macro(i).width * c, nl.macro(i).height * c);
  for (const Net& n : nl.nets()) {
    std::vector<PinRef> pins;
    for (const PinRef& pin : n.pins) pins.push_back({pin.cell, pin.offset_x * c, pin.offset_y * c});
    b.add_net(n.name, pins);
  }
  b.set_canvas({0, 0, 5 * c, 5 * c});
  const Netlist big = std::move(b).build();
  Placement q = p;
  for (Point& pt : q.positions) pt = {pt.x * c, pt.y * c};
  CHECK(hpwl_full(q.positions, big) == c * hpwl_full(p.positions, nl));
  const auto small_map = congestion(p, nl, g).values;
  const auto big_map = congestion(q, big, GridSpec(5, big)).values;
  for (std::size_t i = 0; i < small_map.size(); ++i) {
    CHECK(big_map[i] == doctest::Approx(small_map[i] / c));
  }
}

TEST_CASE("adding a net never lowers any cell") {
  std::mt19937_64 rng(14);
  const auto inst = oracle::random_instance(rng, {.max_macros = 5, .integer = false});
  const GridSpec g(inst.m, inst.netlist);
  Rng grng(3);
  Placement p;
  for (int t = 0; t < 100 && !p.feasible; ++t) {
    p = evaluate(random_genotype(inst.netlist, grng), inst.netlist, g, order_macros(inst.netlist));
  }
  REQUIRE(p.feasible);
  NetlistBuilder b;
  for (std::size_t i = 0; i < inst.netlist.macro_count(); ++i) {
    b.add_macro(inst.netlist.macro(i).name, inst.netlist.macro(i).width, inst.netlist.macro(i).height);
  }
  std::vector<double> prev(g.cell_count(), 0.0);
  for (const Net& n : inst.netlist.nets()) {
    std::vector<PinRef> pins;
    for (const PinRef& pin : n.pins) {
      pins.push_back({inst.netlist.macro_index_of(pin.cell), pin.offset_x, pin.offset_y});
    }
    b.add_net(n.name, pins, n.fixed_pins);
    NetlistBuilder copy = b;
    copy.set_canvas(inst.netlist.canvas());
    const Netlist partial = std::move(copy).build();
    const auto now = congestion(p, partial, g).values;
    for (std::size_t i = 0; i < now.size(); ++i) CHECK(now[i] >= prev[i]);
    prev = now;
  }
}

TEST_CASE("report on the fig3 phenotype") {
  const Netlist nl = parse_aux(fixture::fig3_aux());
  const GridSpec g(5, nl);
  const Placement p = evaluate(read_placement(fixture::data("fig3/fig3.pl"), nl).genotype, nl, g,
                               order_macros(nl));
  const MetricRecord r = report(p, nl, g, 0.25);
  CHECK(r.hpwl == 11.0);
  CHECK(r.overlap_area == 0.0);
  CHECK(r.oob_count == 0);
  CHECK(r.rudy == congestion(p, nl, g).rudy);
  const auto j = to_json(r);
  for (const char* key : {"hpwl", "rudy", "overlap_area", "oob_count", "eval_seconds"}) CHECK(j.contains(key));
  CHECK(j["eval_seconds"].get<double>() == 0.25);

  Placement overlapping = p;
  overlapping.positions[1] = overlapping.positions[0];
  CHECK(total_overlap_area(overlapping.positions, nl) > 0.0);
  overlapping.positions[1] = {4.5, 0};
  CHECK(out_of_bounds_count(overlapping.positions, nl) == 1);
}
