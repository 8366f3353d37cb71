#include <iostream>

#include "banditlab/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    return banditlab::run_cli(args, std::cout, std::cerr);
}
