#include <iostream>

#include "heatpoly/cli.hpp"

int main(int argc, char** argv) { return heatpoly::cli::run(argc, argv, std::cout, std::cerr); }
