#include "wiremask/bookshelf.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>

#include "wiremask/evaluate.hpp"
#include "wiremask/metrics.hpp"

namespace wiremask {

namespace fs = std::filesystem;

ParseError::ParseError(const fs::path& file, std::size_t line, const std::string& token,
                       const std::string& what)
    : std::runtime_error(file.string() + (line ? ":" + std::to_string(line) : std::string()) + ": " +
                         what + (token.empty() ? std::string() : " ('" + token + "')")),
      file_(file),
      line_(line),
      token_(token) {}

namespace {

/// Whitespace tokenizer over a Bookshelf file. ':' is always its own token;
/// blank lines and '#' comments are skipped.
class LineReader {
 public:
  explicit LineReader(const fs::path& path) : path_(path), in_(path) {
    if (!in_) throw ParseError(path, 0, "", "cannot open file");
  }

  bool next() {
    std::string raw;
    while (std::getline(in_, raw)) {
      ++line_no_;
      if (!raw.empty() && raw.back() == '\r') raw.pop_back();
      raw_ = raw;
      tokens_.clear();
      std::string spaced;
      spaced.reserve(raw.size() + 8);
      for (char c : raw) {
        if (c == '#') break;
        if (c == ':') {
          spaced += " : ";
        } else {
          spaced += c;
        }
      }
      std::istringstream ss(spaced);
      std::string tok;
      while (ss >> tok) tokens_.push_back(tok);
      if (!tokens_.empty()) return true;
    }
    return false;
  }

  const std::vector<std::string>& tokens() const { return tokens_; }
  const std::string& raw() const { return raw_; }
  std::size_t line() const { return line_no_; }
  const fs::path& path() const { return path_; }

  [[noreturn]] void fail(const std::string& token, const std::string& what) const {
    throw ParseError(path_, line_no_, token, what);
  }

  double number(std::size_t index) const {
    if (index >= tokens_.size()) fail("", "missing numeric field");
    const std::string& t = tokens_[index];
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size()) fail(t, "malformed number");
    return v;
  }

  bool is_header() const {
    return !tokens_.empty() && (tokens_[0] == "UCLA" || tokens_[0].rfind("Num", 0) == 0);
  }

 private:
  fs::path path_;
  std::ifstream in_;
  std::vector<std::string> tokens_;
  std::string raw_;
  std::size_t line_no_ = 0;
};

struct AuxFiles {
  fs::path nodes, nets, pl, scl;
};

AuxFiles read_aux(const fs::path& aux) {
  LineReader r(aux);
  AuxFiles files;
  const fs::path dir = aux.parent_path();
  while (r.next()) {
    const auto& t = r.tokens();
    auto colon = std::find(t.begin(), t.end(), ":");
    if (colon == t.end()) continue;
    for (auto it = colon + 1; it != t.end(); ++it) {
      const fs::path p = dir / *it;
      const std::string ext = p.extension().string();
      if (ext == ".nodes") files.nodes = p;
      else if (ext == ".nets") files.nets = p;
      else if (ext == ".pl") files.pl = p;
      else if (ext == ".scl") files.scl = p;
    }
  }
  if (files.nodes.empty()) throw ParseError(aux, 0, "", "no .nodes file listed");
  if (files.nets.empty()) throw ParseError(aux, 0, "", "no .nets file listed");
  if (files.pl.empty()) throw ParseError(aux, 0, "", "no .pl file listed");
  for (const fs::path* p : {&files.nodes, &files.nets, &files.pl}) {
    if (!fs::exists(*p)) throw ParseError(*p, 0, "", "missing file");
  }
  if (!files.scl.empty() && !fs::exists(files.scl)) files.scl.clear();
  return files;
}

void read_nodes(const fs::path& path, NetlistBuilder& b) {
  LineReader r(path);
  while (r.next()) {
    if (r.is_header()) continue;
    const auto& t = r.tokens();
    if (t.size() < 3) r.fail(t[0], "expected 'name width height [terminal]'");
    const double w = r.number(1);
    const double h = r.number(2);
    if (w < 0.0 || h < 0.0) r.fail(t[0], "negative node dimension");
    CellKind kind = CellKind::kStandard;
    if (t.size() >= 4) {
      if (t[3] != "terminal" && t[3] != "terminal_NI") r.fail(t[3], "unknown node attribute");
      if (w > 0.0 && h > 0.0) {
        kind = CellKind::kMacro;
      } else if (w == 0.0 && h == 0.0) {
        kind = CellKind::kFixedTerminal;
      } else {
        r.fail(t[0], "zero-area macro");
      }
    }
    try {
      b.add_cell(t[0], w, h, kind);
    } catch (const std::invalid_argument& e) {
      r.fail(t[0], e.what());
    }
  }
}

struct PlRecord {
  Point at;
  std::string line;
};

std::vector<std::optional<PlRecord>> read_pl_records(LineReader& r, const NetlistBuilder& b) {
  std::vector<std::optional<PlRecord>> out(b.cell_count());
  while (r.next()) {
    if (r.is_header()) continue;
    const auto& t = r.tokens();
    if (t.size() < 3) r.fail(t[0], "expected 'name x y : orient'");
    auto id = b.find_cell(t[0]);
    if (!id) r.fail(t[0], "placement for unknown cell");
    out[*id] = PlRecord{{r.number(1), r.number(2)}, r.raw()};
  }
  return out;
}

std::optional<Rect> read_scl(const fs::path& path) {
  LineReader r(path);
  bool any = false;
  Rect c{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
         -std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  double coordinate = 0, height = 0, spacing = 1, origin = 0, sites = 0;
  bool in_row = false;
  while (r.next()) {
    const auto& t = r.tokens();
    if (t[0] == "CoreRow") {
      in_row = true;
      coordinate = height = origin = sites = 0;
      spacing = 1;
      continue;
    }
    if (t[0] == "End") {
      if (!in_row) r.fail(t[0], "End without CoreRow");
      in_row = false;
      any = true;
      c.x0 = std::min(c.x0, origin);
      c.x1 = std::max(c.x1, origin + sites * spacing);
      c.y0 = std::min(c.y0, coordinate);
      c.y1 = std::max(c.y1, coordinate + height);
      continue;
    }
    if (!in_row) continue;
    // Key : value pairs, possibly several per line.
    for (std::size_t k = 0; k + 2 < t.size(); k += 3) {
      if (t[k + 1] != ":") r.fail(t[k + 1], "expected ':'");
      const std::string& key = t[k];
      if (key == "Coordinate") coordinate = r.number(k + 2);
      else if (key == "Height") height = r.number(k + 2);
      else if (key == "Sitespacing") spacing = r.number(k + 2);
      else if (key == "SubrowOrigin") origin = r.number(k + 2);
      else if (key == "NumSites") sites = r.number(k + 2);
    }
  }
  if (in_row) r.fail("", "unterminated CoreRow");
  if (!any) return std::nullopt;
  return c;
}

}  // namespace

Netlist parse_aux(const fs::path& aux, const ParseOptions& options) {
  const AuxFiles files = read_aux(aux);
  NetlistBuilder b(aux.stem().string());
  read_nodes(files.nodes, b);

  LineReader pl_reader(files.pl);
  const auto pl = read_pl_records(pl_reader, b);

  std::optional<Rect> canvas;
  if (!files.scl.empty()) canvas = read_scl(files.scl);
  if (!canvas) {
    Box fixed;
    for (std::uint32_t id = 0; id < b.cell_count(); ++id) {
      const CellRecord& c = b.cell(id);
      if (c.kind == CellKind::kStandard || !pl[id]) continue;
      fixed.add(pl[id]->at.x, pl[id]->at.y);
      fixed.add(pl[id]->at.x + c.width, pl[id]->at.y + c.height);
    }
    if (fixed.empty() || !(fixed.hi_x > fixed.lo_x && fixed.hi_y > fixed.lo_y)) {
      throw ParseError(aux, 0, "", "no .scl rows and no fixed content to derive the canvas from");
    }
    canvas = Rect{fixed.lo_x, fixed.lo_y, fixed.hi_x, fixed.hi_y};
  }
  b.set_canvas(*canvas);

  for (std::uint32_t id = 0; id < b.cell_count(); ++id) {
    if (b.cell(id).kind != CellKind::kMacro && pl[id]) b.add_passthrough(id, pl[id]->line);
  }

  LineReader r(files.nets);
  std::size_t remaining = 0;
  std::string net_name;
  std::vector<PinRef> pins;
  std::vector<Point> fixed_pins;
  std::size_t net_index = 0;
  auto flush = [&] {
    b.add_net(net_name, std::move(pins), std::move(fixed_pins));
    pins.clear();
    fixed_pins.clear();
  };
  bool open = false;
  while (r.next()) {
    const auto& t = r.tokens();
    if (t[0] == "NetDegree") {
      if (open && remaining != 0) r.fail(t[0], "previous net has fewer pins than its degree");
      if (open) flush();
      if (t.size() < 3 || t[1] != ":") r.fail(t[0], "expected 'NetDegree : d [name]'");
      const double d = r.number(2);
      if (d < 0 || d != static_cast<double>(static_cast<std::size_t>(d))) r.fail(t[2], "bad net degree");
      remaining = static_cast<std::size_t>(d);
      net_name = t.size() >= 4 ? t[3] : "net" + std::to_string(net_index);
      ++net_index;
      open = true;
      continue;
    }
    if (r.is_header()) continue;
    if (!open || remaining == 0) r.fail(t[0], "pin line outside a net");
    auto id = b.find_cell(t[0]);
    if (!id) r.fail(t[0], "pin references unknown cell");
    double ox = 0.0, oy = 0.0;
    auto colon = std::find(t.begin(), t.end(), ":");
    if (colon != t.end()) {
      const auto k = static_cast<std::size_t>(colon - t.begin());
      ox = r.number(k + 1);
      oy = r.number(k + 2);
    }
    const CellRecord& c = b.cell(*id);
    ox += c.width / 2;
    oy += c.height / 2;
    if (c.kind == CellKind::kMacro) {
      pins.push_back({*id, ox, oy});
    } else if (c.kind == CellKind::kFixedTerminal && options.include_fixed_pins && pl[*id]) {
      fixed_pins.push_back({pl[*id]->at.x + ox, pl[*id]->at.y + oy});
    }
    --remaining;
  }
  if (open) {
    if (remaining != 0) r.fail("", "last net has fewer pins than its degree");
    flush();
  }
  try {
    return std::move(b).build();
  } catch (const std::invalid_argument& e) {
    throw ParseError(aux, 0, "", e.what());
  }
}

PlacementRead read_placement(const fs::path& path, const Netlist& netlist) {
  LineReader r(path);
  const std::size_t k = netlist.macro_count();
  std::vector<std::optional<Point>> found(k);
  while (r.next()) {
    if (r.is_header()) continue;
    const auto& t = r.tokens();
    auto id = netlist.find_cell(t[0]);
    if (!id) continue;
    const std::uint32_t macro = netlist.macro_index_of(*id);
    if (macro == Netlist::kNotMacro) continue;
    if (t.size() < 3) r.fail(t[0], "expected 'name x y'");
    found[macro] = Point{r.number(1), r.number(2)};
  }
  PlacementRead out{Genotype(k), 0};
  const Rect& c = netlist.canvas();
  for (std::size_t i = 0; i < k; ++i) {
    if (!found[i]) throw ParseError(path, 0, netlist.macro(i).name, "macro missing from placement");
    const Point p = clamp_to_canvas(*found[i], c);
    if (!(p == *found[i])) ++out.clamped;
    out.genotype.set(i, p);
  }
  return out;
}

std::string format_coordinate(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

void write_placement(const Placement& placement, const Netlist& netlist, const fs::path& path) {
  if (!placement.feasible || placement.positions.size() != netlist.macro_count()) {
    throw ContractViolation("refusing to write an infeasible placement");
  }
  const double tol = 1e-9 * std::max(netlist.canvas_width(), netlist.canvas_height());
  if (total_overlap_area(placement.positions, netlist) > 0.0) {
    throw ContractViolation("refusing to write a placement with overlapping macros");
  }
  if (out_of_bounds_count(placement.positions, netlist, tol) != 0) {
    throw ContractViolation("refusing to write a placement with macros outside the canvas");
  }

  std::vector<std::uint32_t> by_name(netlist.macro_count());
  for (std::uint32_t i = 0; i < by_name.size(); ++i) by_name[i] = i;
  std::sort(by_name.begin(), by_name.end(), [&](std::uint32_t a, std::uint32_t b) {
    return netlist.macro(a).name < netlist.macro(b).name;
  });

  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "UCLA pl 1.0\n\n";
  for (std::uint32_t i : by_name) {
    const Point& p = placement.positions[i];
    out << netlist.macro(i).name << ' ' << format_coordinate(p.x) << ' ' << format_coordinate(p.y)
        << " : N\n";
  }
  for (const PassthroughRecord& rec : netlist.passthrough()) out << rec.line << '\n';
  if (!out) throw std::runtime_error("I/O failure writing " + path.string());
}

}  // namespace wiremask
