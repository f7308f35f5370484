#include <iostream>

#include "mlsurf/cli.hpp"

int main(int argc, char** argv) { return mlsurf::cli::run(argc, argv, std::cout, std::cerr); }
