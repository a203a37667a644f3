#include <iostream>

#include "hyperjac/cli.hpp"

int main(int argc, char** argv) { return hyperjac::run_cli(argc, argv, std::cout, std::cerr); }
