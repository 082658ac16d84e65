#include "hybefs/cli.hpp"

int main(int argc, char** argv) { return hybefs::cli::main(argc, argv); }
