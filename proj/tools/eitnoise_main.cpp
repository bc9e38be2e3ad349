#include "eitnoise/cli.hpp"

int main(int argc, char** argv) { return eit::cli::main(argc, argv); }
