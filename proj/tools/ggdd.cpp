#include "ggdd/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return ggdd::run_cli(argc, argv, std::cout, std::cerr); }
