#include <iostream>

#include "ilseval/cli/commands.hpp"

int main(int argc, char** argv) { return ilseval::cli::run(argc, argv, std::cout, std::cerr); }
