#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include "wiremask/types.hpp"

namespace fixture {

namespace fs = std::filesystem;

inline fs::path data(const std::string& rel) { return fs::path(WIREMASK_TEST_DATA) / rel; }
inline fs::path fig3_aux() { return data("fig3/fig3.aux"); }

/// Fresh empty directory under the system temp dir.
inline fs::path scratch(const std::string& tag) {
  std::random_device rd;
  const fs::path p = fs::temp_directory_path() / ("wiremask_" + tag + "_" + std::to_string(rd()));
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

inline void write(const fs::path& p, const std::string& text) {
  std::ofstream out(p);
  out << text;
}

/// Writes name.aux plus the listed member files; returns the .aux path.
inline fs::path bookshelf(const fs::path& dir, const std::string& nodes, const std::string& nets,
                          const std::string& pl, const std::string& scl = {}) {
  write(dir / "t.nodes", nodes);
  write(dir / "t.nets", nets);
  write(dir / "t.pl", pl);
  std::string aux = "RowBasedPlacement : t.nodes t.nets t.pl";
  if (!scl.empty()) {
    write(dir / "t.scl", scl);
    aux += " t.scl";
  }
  write(dir / "t.aux", aux + "\n");
  return dir / "t.aux";
}

/// One row record spanning [x0, x0 + width] x [y, y + height].
inline std::string scl_row(double x0, double y, double width, double height) {
  return "CoreRow Horizontal\n  Coordinate : " + std::to_string(y) + "\n  Height : " +
         std::to_string(height) + "\n  Sitewidth : 1\n  Sitespacing : 1\n  SubrowOrigin : " +
         std::to_string(x0) + " NumSites : " + std::to_string(width) + "\nEnd\n";
}

}  // namespace fixture
