#include <iostream>

#include "ruled/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return ruled::cli::parse_and_dispatch(args, std::cout, std::cerr);
}
