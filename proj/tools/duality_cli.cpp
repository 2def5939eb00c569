#include <iostream>

#include "duality/cli.hpp"

int main(int argc, char** argv) { return duality::run_cli(argc, argv, std::cout, std::cerr); }
