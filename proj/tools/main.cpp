#include <iostream>

#include "physnav/cli/commands.hpp"

int main(int argc, char** argv) { return physnav::run_cli(argc, argv, std::cout, std::cerr); }
