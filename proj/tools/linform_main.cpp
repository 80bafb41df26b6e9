#include "linform/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return linform::cli_main(argc, argv, std::cout, std::cerr); }
