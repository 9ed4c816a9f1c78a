#include <iostream>

#include "tpo/cli.hpp"

int main(int argc, char** argv) { return tpo::cli::run({argv, argv + argc}, std::cout, std::cerr); }
