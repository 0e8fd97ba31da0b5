#include <iostream>

#include "hdg/app/commands.hpp"

int main(int argc, char** argv) { return hdg::app::run_cli(argc, argv, std::cout, std::cerr); }
