#include <iostream>

#include "mixsem/cli.hpp"

int main(int argc, char** argv) { return mixsem::cli::run(argc, argv, std::cout, std::cerr); }
