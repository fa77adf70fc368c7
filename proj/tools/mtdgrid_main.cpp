#include <iostream>

#include "mtdgrid/cli.hpp"

int main(int argc, char** argv) {
  return mtdgrid::cli::run(argc, argv, std::cout, std::cerr);
}
