#include <iostream>
#include <string>
#include <vector>

#include "l1l2/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return l1l2::cli::run(args, std::cout, std::cerr);
}
