#include <iostream>

#include "geqn/cli.hpp"

int main(int argc, char** argv) { return geqn::run_cli(argc, argv, std::cout, std::cerr); }
