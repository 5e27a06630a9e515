#include <iostream>

#include "odlab/cli.hpp"

int main(int argc, char** argv)
{
    return odlab::run_cli(argc, argv, std::cout, std::cerr);
}
