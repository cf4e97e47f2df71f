#pragma once

#include <cstddef>
#include <filesystem>
#include <stdexcept>
#include <string>

#include "wiremask/netlist.hpp"
#include "wiremask/types.hpp"

namespace wiremask {

struct Placement;

/// Malformed or inconsistent Bookshelf input. The message carries the file,
/// the 1-based line number and the offending token when known.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::filesystem::path& file, std::size_t line, const std::string& token,
             const std::string& what);

  const std::filesystem::path& file() const { return file_; }
  std::size_t line() const { return line_; }
  const std::string& token() const { return token_; }

 private:
  std::filesystem::path file_;
  std::size_t line_;
  std::string token_;
};

struct ParseOptions {
  /// Attach fixed terminals (pads) of retained nets as fixed pins.
  bool include_fixed_pins = false;
};

/// Reads an ISPD2005-style benchmark. Terminals with positive area become
/// movable macros; point terminals become fixed terminals; everything else is
/// a standard cell and is dropped from nets.
Netlist parse_aux(const std::filesystem::path& aux, const ParseOptions& options = {});

struct PlacementRead {
  Genotype genotype;
  std::size_t clamped = 0;  // macros whose coordinates were pulled onto the canvas
};

/// Reads macro bottom-left coordinates from a `.pl` file.
PlacementRead read_placement(const std::filesystem::path& pl, const Netlist& netlist);

/// Writes a legal placement as Bookshelf `.pl`. Macros come first in name
/// order, then pass-through lines of the source `.pl`. Throws
/// ContractViolation (without touching `pl`) if the placement is illegal.
void write_placement(const Placement& placement, const Netlist& netlist,
                     const std::filesystem::path& pl);

/// Shortest decimal text that parses back to the same double.
std::string format_coordinate(double v);

}  // namespace wiremask
