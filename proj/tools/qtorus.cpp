#include "qtorus/cli.hpp"

#include <iostream>

int main(int argc, char **argv) {
    return qtorus::cli::dispatch(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
