#include <iostream>

#include "mqdecay/cli.hpp"

int main(int argc, char** argv) {
  return mqdecay::cli::run(argc, argv, std::cout, std::cerr);
}
