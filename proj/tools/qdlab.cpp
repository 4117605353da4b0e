#include <iostream>

#include "qdlab/cli.hpp"

int main(int argc, char** argv) { return qdlab::run_cli(argc, argv, std::cout, std::cerr); }
