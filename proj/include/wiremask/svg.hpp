#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>

#include "wiremask/netlist.hpp"
#include "wiremask/types.hpp"

namespace wiremask {

struct SvgOptions {
  std::optional<int> grid_partitions;  // draw m x m grid lines when set
  double pixels = 800.0;               // length of the longer canvas side
};

/// Canvas frame plus one filled rectangle per macro, y axis pointing up.
/// Output depends only on the inputs.
std::string render_svg(std::span<const Point> positions, const Netlist& netlist,
                       const SvgOptions& options = {});

void write_svg(const std::filesystem::path& path, std::span<const Point> positions,
               const Netlist& netlist, const SvgOptions& options = {});

}  // namespace wiremask
