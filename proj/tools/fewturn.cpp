#include <iostream>
#include <string>
#include <vector>

#include "fewturn/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return fewturn::run_cli(std::move(args), std::cout, std::cerr);
}
