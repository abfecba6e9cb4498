#include <iostream>

#include "pforge/cli.hpp"

int main(int argc, char** argv) { return pforge::run_cli(argc, argv, std::cout, std::cerr); }
