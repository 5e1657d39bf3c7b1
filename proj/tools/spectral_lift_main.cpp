#include <iostream>

#include "spectral_lift/cli_driver.hpp"

int main(int argc, char** argv) {
  return spectral_lift::run_cli(argc, argv, std::cout, std::cerr);
}
