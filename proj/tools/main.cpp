#include <iostream>

#include "vpoem/cli.hpp"

int main(int argc, char** argv) {
  return vpoem::cli::run(argc, argv, std::cin, std::cout, std::cerr);
}
