#include <iostream>

#include "macpol/cli.hpp"

int main(int argc, char** argv) { return macpol::cli::run(argc, argv, std::cout, std::cerr); }
