#include "minact/cli/commands.hpp"

int main(int argc, char** argv) { return minact::cli::run_cli(argc, argv); }
