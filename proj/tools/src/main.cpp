#include <iostream>

#include "tikreg/cli.hpp"

int main(int argc, char** argv) { return tikreg::cli_main(argc, argv, std::cout, std::cerr); }
