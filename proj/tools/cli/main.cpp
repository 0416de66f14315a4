#include <iostream>

#include "sce/cli/commands.hpp"

int main(int argc, char** argv) { return sce::cli::run(argc, argv, std::cout, std::cerr); }
