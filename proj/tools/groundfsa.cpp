#include <iostream>

#include "groundfsa/cli.hpp"

int main(int argc, char** argv) { return groundfsa::cli::dispatch(argc, argv, std::cout, std::cerr); }
