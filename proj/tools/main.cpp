#include <iostream>
#include <string>
#include <vector>

#include "coarsedim/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return coarsedim::run(args, std::cout, std::cerr);
}
