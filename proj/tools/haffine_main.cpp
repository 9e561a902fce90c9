#include <iostream>

#include "haffine/cli.hpp"

int main(int argc, char** argv) { return haffine::cli::run(argc, argv, std::cout, std::cerr); }
