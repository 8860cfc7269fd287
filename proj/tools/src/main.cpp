#include <iostream>

#include "fraclat/cli.hpp"

int main(int argc, char** argv) { return fraclat::cli::run(argc, argv, std::cout, std::cerr); }
