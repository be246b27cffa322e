#include <iostream>

#include "geoclust/cli.hpp"

int main(int argc, char** argv) { return geoclust::cli::run(argc, argv, std::cout, std::cerr); }
