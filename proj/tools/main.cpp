#include <iostream>
#include <string>
#include <vector>

#include "mtaylor/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return mtaylor::cli::run(args, std::cout, std::cerr);
}
