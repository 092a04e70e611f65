#include <iostream>

#include "apf/cli.hpp"

int main(int argc, char** argv) {
    return apf::run_cli(argc, argv, std::cout, std::cerr);
}
