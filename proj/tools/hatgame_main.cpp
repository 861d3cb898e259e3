#include <iostream>
#include <string>
#include <vector>

#include "hatgame/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return hatgame::run_cli(args, std::cout, std::cerr);
}
