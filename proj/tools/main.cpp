#include <iostream>

#include "circext/cli.hpp"

int main(int argc, char** argv) { return circext::cli::main_entry(argc, argv, std::cout, std::cerr); }
