#include "zerocorr/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
    return zerocorr::run_cli(argc, argv, std::cout, std::cerr);
}
