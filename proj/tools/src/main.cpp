#include <iostream>

#include "kepart/cli/commands.hpp"

int main(int argc, char** argv) { return kepart::cli::run(argc, argv, std::cout, std::cerr); }
