#include <iostream>

#include "eolo_app/cli.hpp"

int main(int argc, char** argv) { return eolo::app::run_cli(argc, argv, std::cout, std::cerr); }
