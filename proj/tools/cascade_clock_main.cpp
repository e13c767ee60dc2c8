#include <iostream>

#include "cascade_clock/cli.hpp"

int main(int argc, char** argv) {
  return cascade_clock::run_cli(argc, argv, std::cout, std::cerr);
}
