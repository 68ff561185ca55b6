#include <iostream>

#include "covest/cli.hpp"

int main(int argc, char** argv) {
    return covest::run_cli(argc, argv, std::cout, std::cerr);
}
