#include <iostream>

#include "mwetk/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return mwetk::run_cli(args, std::cin, std::cout, std::cerr);
}
