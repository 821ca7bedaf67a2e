#include "cli.hpp"

int main(int argc, char** argv) { return besovlab::cli::cli_main(argc, argv); }
