#include <iostream>

#include "cfmm/cli.hpp"

int main(int argc, char** argv) { return cfmm::run_cli(argc, argv, std::cout, std::cerr); }
