#include <iostream>

#include "otw/cli.hpp"

int main(int argc, char** argv) { return otw::run_cli(argc, argv, std::cout, std::cerr); }
