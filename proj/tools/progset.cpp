#include <iostream>
#include <string>
#include <vector>

#include "progset/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return progset::run_cli(args, std::cout, std::cerr);
}
