#include <iostream>

#include "xlp_cli.hpp"

int main(int argc, char** argv) { return xlp::cli::run_cli(argc, argv, std::cout, std::cerr); }
