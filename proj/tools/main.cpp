#include <iostream>

#include "bcs/commands.hpp"

int main(int argc, char** argv) { return bcs::run_cli(argc, argv, std::cout, std::cerr); }
