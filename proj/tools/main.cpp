#include <iostream>

#include "hww2v/cli.hpp"

int main(int argc, char** argv) { return hww2v::run_cli(argc, argv, std::cout, std::cerr); }
