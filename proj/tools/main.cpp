#include <iostream>
#include <string>
#include <vector>

#include "diastasis/cli.hpp"

int main(int argc, char** argv)
{
    const std::vector<std::string> args(argv + 1, argv + argc);
    return diastasis::cli_dispatch(args, std::cout, std::cerr);
}
