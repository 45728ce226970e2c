#include <iostream>

#include "nsplab/cli.hpp"

int main(int argc, char** argv) { return nsplab::cli_main(argc, argv, std::cout, std::cerr); }
