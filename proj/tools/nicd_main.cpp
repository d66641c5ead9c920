#include <iostream>

#include "nicd/cli.hpp"

int main(int argc, char** argv) {
  return nicd::run_cli(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
