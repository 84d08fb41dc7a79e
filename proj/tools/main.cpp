#include <iostream>

#include "h2body/cli.hpp"

int main(int argc, char** argv) { return h2body::cli::run(argc, argv, std::cout, std::cerr); }
