#include <iostream>

#include "dofd/cli.hpp"

int main(int argc, char** argv) { return dofd::run_cli(argc, argv, std::cout, std::cerr); }
