#include "lleekit/cli.hpp"

#include <iostream>

int main(int argc, char** argv)
{
    return lleekit::run({argv + 1, argv + argc}, std::cout, std::cerr);
}
