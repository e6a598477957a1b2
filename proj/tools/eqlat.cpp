#include <iostream>

#include "eqlat/cli.hpp"

int main(int argc, char** argv) {
  return eqlat::run_cli({argv + 1, argv + argc}, std::cout, std::cerr);
}
