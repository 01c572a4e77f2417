#include <iostream>
#include <string>
#include <vector>

#include "mahler/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv, argv + argc);
  return mahler::cli::run(args, std::cout, std::cerr);
}
