#include <iostream>

#include "xsl/cli.hpp"

int main(int argc, char** argv) { return xsl::run_cli(argc, argv, std::cout, std::cerr); }
