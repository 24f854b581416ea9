#include <iostream>

#include "knotflow/cli_io.hpp"

int main(int argc, char** argv) { return knotflow::run_cli(argc, argv, std::cout, std::cerr); }
