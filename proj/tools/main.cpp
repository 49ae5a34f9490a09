#include <iostream>

#include "primerec/cli.hpp"

int main(int argc, char** argv) { return primerec::cli::run(argc, argv, std::cout, std::cerr); }
