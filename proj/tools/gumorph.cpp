#include <iostream>
#include <string>
#include <vector>

#include "gumorph/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return gumorph::cli::run(args, std::cout, std::cerr);
}
