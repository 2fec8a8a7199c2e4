#include <iostream>

#include "siegel3/cli.hpp"

int main(int argc, char** argv) { return siegel3::cli_main(argc, argv, std::cout, std::cerr); }
