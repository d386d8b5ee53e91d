#include <iostream>

#include "pcmci/cli.hpp"

int main(int argc, char** argv) { return pcmci::run_cli(argc, argv, std::cout, std::cerr); }
