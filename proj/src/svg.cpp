#include "wiremask/svg.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "wiremask/bookshelf.hpp"

namespace wiremask {

namespace {

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string render_svg(std::span<const Point> positions, const Netlist& netlist,
                       const SvgOptions& options) {
  const Rect& c = netlist.canvas();
  const double scale = options.pixels / std::max(c.width(), c.height());
  const auto fmt = [](double v) { return format_coordinate(v); };
  const auto sx = [&](double x) { return (x - c.x0) * scale; };
  const auto sy = [&](double y) { return (c.y1 - y) * scale; };
  const double w = c.width() * scale;
  const double h = c.height() * scale;

  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(w) << "\" height=\"" << fmt(h)
      << "\" viewBox=\"0 0 " << fmt(w) << ' ' << fmt(h) << "\">\n"
      << "<rect class=\"canvas\" x=\"0\" y=\"0\" width=\"" << fmt(w) << "\" height=\"" << fmt(h)
      << "\" fill=\"white\" stroke=\"black\" stroke-width=\"1\"/>\n";

  if (options.grid_partitions && *options.grid_partitions > 0) {
    const int m = *options.grid_partitions;
    out << "<path class=\"grid\" stroke=\"#cccccc\" stroke-width=\"0.5\" fill=\"none\" d=\"";
    for (int i = 1; i < m; ++i) {
      const double x = w * i / m;
      const double y = h * i / m;
      out << 'M' << fmt(x) << " 0V" << fmt(h) << 'M' << "0 " << fmt(y) << 'H' << fmt(w);
    }
    out << "\"/>\n";
  }

  for (std::size_t i = 0; i < positions.size(); ++i) {
    const CellRecord& cell = netlist.macro(i);
    const Point& p = positions[i];
    out << "<rect class=\"macro\" x=\"" << fmt(sx(p.x)) << "\" y=\"" << fmt(sy(p.y + cell.height))
        << "\" width=\"" << fmt(cell.width * scale) << "\" height=\"" << fmt(cell.height * scale)
        << "\" fill=\"#f5d142\" stroke=\"#806a00\" stroke-width=\"0.5\"><title>" << escape(cell.name)
        << "</title></rect>\n";
  }
  out << "</svg>\n";
  return out.str();
}

void write_svg(const std::filesystem::path& path, std::span<const Point> positions,
               const Netlist& netlist, const SvgOptions& options) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << render_svg(positions, netlist, options);
  if (!out) throw std::runtime_error("I/O failure writing " + path.string());
}

}  // namespace wiremask
