#include <iostream>

#include "cymod/cli.hpp"

int main(int argc, char** argv) { return cymod::cli::run(argc, argv, std::cout, std::cerr); }
