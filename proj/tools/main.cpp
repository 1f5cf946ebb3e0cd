#include <iostream>

#include "melodify/cli.hpp"

int main(int argc, char** argv) {
    return melodify::cli::run(argc, argv, std::cout, std::cerr);
}
