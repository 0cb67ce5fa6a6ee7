#include "gmfs/cli.hpp"

int main(int argc, char** argv) { return gmfs::cli::main(argc, argv); }
