#include <iostream>
#include <string>
#include <vector>

#include "relmech/cli/commands.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return relmech::cli::run(args, std::cout, std::cerr);
}
