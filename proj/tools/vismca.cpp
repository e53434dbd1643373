#include <iostream>

#include "vismca/service/cli.hpp"

int main(int argc, char** argv) { return vismca::service::run_cli(argc, argv, std::cout, std::cerr); }
