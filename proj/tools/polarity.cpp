#include "polarity/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return polarity::run_cli(argc, argv, std::cout, std::cerr); }
