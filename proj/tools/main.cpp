#include <iostream>

#include "hetsphere/cli.hpp"

int main(int argc, char** argv) { return hetsphere::run_cli(argc, argv, std::cout, std::cerr); }
