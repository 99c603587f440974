#include "cpflow/run.hpp"

#include <iostream>

int main(int argc, char** argv) { return cpflow::run_cli(argc, argv, std::cout, std::cerr); }
