#include "polariton/cli.hpp"

#include <iostream>

int main(int argc, char** argv)
{
    return polariton::run_cli(argc, argv, std::cout, std::cerr);
}
