#include "intuition/cli.hpp"

#include <iostream>

extern char** environ;

int main(int argc, char** argv) {
    return intuition::cli::run_main(argc, argv, std::cout, std::cerr, environ);
}
