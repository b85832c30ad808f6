#include <iostream>

#include "commands.hpp"

int main(int argc, char **argv) { return hrv::cli::run(argc, argv, std::cerr); }
