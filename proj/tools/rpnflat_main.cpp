#include <iostream>

#include "rpnflat/cli.hpp"

int main(int argc, char** argv) { return rpnflat::cli::run_cli(argc, argv, std::cout, std::cerr); }
