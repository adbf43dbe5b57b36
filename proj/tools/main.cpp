#include <iostream>
#include <string>
#include <vector>

#include "betarate/cli.hpp"

int main(int argc, char** argv) {
    const std::vector<std::string> args(argv + 1, argv + argc);
    return betarate::app::cli_dispatch(args, std::cout, std::cerr);
}
