#include <iostream>
#include <string>
#include <vector>

#include "arc/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    return arc::run_cli(args, std::cout, std::cerr);
}
