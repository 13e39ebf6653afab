#include <iostream>
#include <string>
#include <vector>

#include "gradflow/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return gradflow::cli::run(args, std::cout, std::cerr);
}
