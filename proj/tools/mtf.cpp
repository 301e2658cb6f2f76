#include <iostream>

#include "mtf/cli.hpp"

int main(int argc, char** argv) { return mtf::main_entry(argc, argv, std::cout, std::cerr); }
