#include <iostream>

#include "rotgraph/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return rotgraph::run_cli(args, std::cout, std::cerr);
}
