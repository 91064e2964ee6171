#include <iostream>

#include "epprobit/cli.hpp"

int main(int argc, char** argv) {
    return epprobit::run_cli(argc, argv, std::cout, std::cerr);
}
