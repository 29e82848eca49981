#include "gspec/cli.hpp"

int main(int argc, char** argv) { return gspec::cli::run(argc, argv); }
