#include <iostream>

#include "conflab/cli_runner.hpp"

int main(int argc, char** argv) { return conflab::run_cli(argc, argv, std::cout, std::cerr); }
