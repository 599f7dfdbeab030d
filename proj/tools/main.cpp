#include <iostream>

#include "radixlab/cli.hpp"

int main(int argc, char** argv) { return radixlab::cli::run(argc, argv, std::cout, std::cerr); }
