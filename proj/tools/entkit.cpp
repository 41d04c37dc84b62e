#include <iostream>

#include "entkit/cli.hpp"

int main(int argc, char** argv) { return entkit::run_cli(argc, argv, std::cout, std::cerr); }
