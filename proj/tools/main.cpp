#include <iostream>
#include <string>
#include <vector>

#include "causal/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return causal::cli::run(args, std::cout, std::cerr);
}
