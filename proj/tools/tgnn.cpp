#include <iostream>

#include "tgnn/cli/commands.hpp"

int main(int argc, char** argv) { return tgnn::cli::run_cli(argc, argv, std::cout, std::cerr); }
