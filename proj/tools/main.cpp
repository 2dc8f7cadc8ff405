#include <iostream>
#include <string>
#include <vector>

#include "dfp_cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return dfp::cli::run(args, std::cout, std::cerr);
}
