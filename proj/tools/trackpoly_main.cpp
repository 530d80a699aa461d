#include "trackpoly/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return trackpoly::run_cli(argc, argv, std::cout, std::cerr); }
