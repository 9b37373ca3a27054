#include "cli.hpp"

#include <iostream>

int main(int argc, char **argv) {
  return map2fit::cli::run(argc, argv, std::cout, std::cerr);
}
