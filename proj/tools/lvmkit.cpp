#include <iostream>

#include "lvmkit/cli.hpp"

int main(int argc, char** argv) { return lvmkit::run_cli(argc, argv, std::cout, std::cerr); }
