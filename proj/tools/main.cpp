#include <iostream>

#include "entangleid/cli.hpp"

int main(int argc, char** argv) {
  return entangleid::cli::dispatch(argc, argv, std::cout, std::cerr);
}
