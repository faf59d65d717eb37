#include <iostream>

#include "mtn/harness/cli.hpp"

int main(int argc, char** argv) { return mtn::cli::run(argc, argv, std::cout, std::cerr); }
