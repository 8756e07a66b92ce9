#include <iostream>

#include "sulfex/cli.hpp"

int main(int argc, char** argv) { return sulfex::run_cli(argc, argv, std::cout, std::cerr); }
