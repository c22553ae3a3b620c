#include <iostream>

#include "geoflow/cli/cli.hpp"

int main(int argc, char** argv) { return geoflow::cli::dispatch(argc, argv, std::cout, std::cerr); }
