#include <iostream>

#include "hypogd/cli.hpp"

int main(int argc, char** argv) {
  return hypogd::cli::main_impl(argc, argv, std::cout, std::cerr);
}
