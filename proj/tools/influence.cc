#include <iostream>
#include <string>
#include <vector>

#include "influence/cli.h"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return influence::cli_main(args, std::cout, std::cerr);
}
