#include "piston/cli.hpp"

int main(int argc, char** argv) { return piston::cli(argc, argv); }
