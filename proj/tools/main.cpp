#include <iostream>

#include "cli/cli.hpp"

int main(int argc, char** argv) { return mft::cli::parse_and_dispatch(argc, argv, std::cout, std::cerr); }
