#include <iostream>
#include <string>
#include <vector>

#include "zipboost/cli/commands.h"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return zipboost::cli::run(args, std::cout, std::cerr);
}
