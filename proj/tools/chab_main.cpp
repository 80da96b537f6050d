#include <iostream>
#include <vector>

#include "chab/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return chab::run_cli(args, std::cout, std::cerr);
}
