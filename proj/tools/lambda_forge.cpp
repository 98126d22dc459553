/**
 * @file lambda_forge.cpp
 * @brief Entry point of the lambda-forge command-line tool.
 */

#include <iostream>
#include <string>
#include <vector>

#include <lambda_forge/cli.hpp>

int main(int argc, char** argv)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    return lambda_forge::run_cli(args, std::cout, std::cerr);
}
