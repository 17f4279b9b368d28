#include <iostream>

#include "syllog/cli.hpp"

int main(int argc, char** argv) {
  return syllog::run_cli(argc, argv, std::cout, std::cerr);
}
