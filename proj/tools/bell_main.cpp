#include <iostream>

#include "bell/cli.hpp"

int main(int argc, char** argv) {
    return bell::cli::run(argc, argv, std::cout, std::cerr);
}
