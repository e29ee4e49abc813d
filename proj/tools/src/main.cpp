#include <iostream>

#include "phasetopo_cli/commands.hpp"

int main(int argc, char** argv) { return phasetopo::cli::main_entry(argc, argv, std::cout, std::cerr); }
