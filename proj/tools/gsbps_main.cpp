#include "gsbps/cli.hpp"

int main(int argc, char** argv) { return gsbps::cli::run(argc, argv); }
