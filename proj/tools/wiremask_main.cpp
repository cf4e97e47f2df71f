#include <iostream>
#include <string>
#include <vector>

#include "wiremask/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return wiremask::cli::run_cli(args, std::cout, std::cerr);
}
