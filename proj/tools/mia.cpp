#include <iostream>
#include <string>
#include <vector>

#include "mia/cli/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return mia::cli::run(args, std::cout, std::cerr);
}
