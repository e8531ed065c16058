// vdfm - command-line entry point
#include <iostream>

#include "vdfm/cli.hpp"

int main(int argc, char ** argv)
{
  std::vector<std::string> args(argv + 1, argv + argc);
  return vdfm::cli::run(args, std::cout, std::cerr);
}
