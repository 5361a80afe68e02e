#include <iostream>

#include "tmx/cli.hpp"

int main(int argc, char** argv) { return tmx::run_cli(argc, argv, std::cout, std::cerr); }
