#include <ris/cli.hpp>

#include <iostream>

int main(int argc, char** argv)
{
    return ris::parse_and_dispatch(argc, argv, std::cout, std::cerr);
}
