#include <iostream>

#include "teamcheck/cli.hpp"

int main(int argc, char** argv) { return teamcheck::cli::run(argc, argv, std::cout, std::cerr); }
