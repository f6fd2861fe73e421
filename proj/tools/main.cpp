#include <iostream>
#include <string>
#include <vector>

#include "syz/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return syz::run_cli(args, std::cout, std::cerr);
}
