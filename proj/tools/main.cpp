#include <iostream>

#include "metaseo/cli.hpp"

int main(int argc, char** argv) { return metaseo::run_cli(argc, argv, std::cout, std::cerr); }
