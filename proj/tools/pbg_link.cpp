#include <iostream>

#include "pbg/cli.hpp"

int main(int argc, char** argv) { return pbg::cli::main_entry(argc, argv, std::cout, std::cerr); }
