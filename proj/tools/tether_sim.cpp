#include <iostream>
#include <string>
#include <vector>

#include "tether_dobc/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return tether_dobc::run_cli(args, std::cout, std::cerr);
}
