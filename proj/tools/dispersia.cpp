#include "dispersia/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return dispersia::cli::run(argc, argv, std::cout, std::cerr); }
