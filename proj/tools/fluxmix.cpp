#include "fluxmix/cli.hpp"

#include <iostream>

int main(int argc, char** argv)
{
    return fluxmix::run_cli(argc, argv, std::cout, std::cerr);
}
