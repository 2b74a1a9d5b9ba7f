#include <iostream>

#include "lrt/cli.hpp"

int main(int argc, char** argv) { return lrt::cli::run(argc, argv, std::cout, std::cerr); }
