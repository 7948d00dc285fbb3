#include "cli.hpp"

int main(int argc, char** argv) { return pushopt::cli_main(argc, argv); }
