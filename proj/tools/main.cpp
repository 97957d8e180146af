#include <iostream>

#include "geomlab/cli.hpp"

int main(int argc, char** argv) { return geomlab::cli_main(argc, argv, std::cout, std::cerr); }
