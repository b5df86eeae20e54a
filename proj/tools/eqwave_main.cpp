#include <iostream>

#include "eqwave/cli.hpp"

int main(int argc, char** argv) { return eqwave::run_cli(argc, argv, std::cout, std::cerr); }
