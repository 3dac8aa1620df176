#include <iostream>

#include "glissando/cli/app.hpp"

int main(int argc, char** argv) { return glissando::cli::run(argc, argv, std::cout, std::cerr); }
