#include <iostream>
#include <string>
#include <vector>

#include "chemo/cli.hpp"

int main(int argc, char** argv) {
    return chemo::cli::main(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
