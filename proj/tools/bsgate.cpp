#include <iostream>

#include "bsgate/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return bsgate::run_cli(args, std::cout, std::cerr);
}
