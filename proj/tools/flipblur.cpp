#include <iostream>

#include "flipblur/cli/commands.hpp"

int main(int argc, char** argv) { return flipblur::cli::run(argc, argv, std::cout, std::cerr); }
