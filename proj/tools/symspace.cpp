#include <iostream>

#include "symspace/cli.hpp"

int main(int argc, char** argv) { return symspace::cli::run(argc, argv, std::cout, std::cerr); }
