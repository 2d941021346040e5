#include "h4free/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return h4free::run({argv + 1, argv + argc}, std::cout, std::cerr); }
