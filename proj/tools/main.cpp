#include "cli/cli.hpp"

int main(int argc, char** argv) { return radsing::cli::run(argc, argv); }
