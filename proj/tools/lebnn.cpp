#include <iostream>

#include "lebnn/cli.hpp"

int main(int argc, char** argv) { return lebnn::run_cli(argc, argv, std::cerr); }
