#include <iostream>

#include "fermikit/cli.hpp"

int main(int argc, char** argv) { return fermikit::run_cli(argc, argv, std::cout, std::cerr); }
