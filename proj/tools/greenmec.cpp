#include <iostream>

#include "greenmec/cli.hpp"

int main(int argc, char** argv) {
  return greenmec::cli::main_cli(argc, argv, {std::cout, std::cerr});
}
