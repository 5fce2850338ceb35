#include <iostream>
#include <string>
#include <vector>

#include "ptsusy/cli.hpp"

int main(int argc, char** argv) {
  return ptsusy::cli::run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
