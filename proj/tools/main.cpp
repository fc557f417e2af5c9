// SPDX-License-Identifier: Apache-2.0
#include "persuasion/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return persuasion::run_cli(args, std::cout, std::cerr);
}
