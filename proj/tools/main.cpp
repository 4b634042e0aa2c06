#include <iostream>

#include "sybil/cli.hpp"

int main(int argc, char** argv) { return sybil::run_cli(argc, argv, std::cout, std::cerr); }
