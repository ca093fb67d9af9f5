#include <iostream>

#include "iccap/cli/commands.hpp"

int main(int argc, char** argv) { return iccap::cli::run_cli(argc, argv, std::cout, std::cerr); }
