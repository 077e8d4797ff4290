#include <iostream>
#include <string>
#include <vector>

#include "rdkw/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return rdkw::cli::run_cli(args, std::cout, std::cerr);
}
