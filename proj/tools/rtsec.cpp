#include <iostream>

#include "rtsec/cli.hpp"

int main(int argc, char** argv) { return rtsec::cli::run(argc, argv, std::cout, std::cerr); }
