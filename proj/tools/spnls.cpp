#include "spnls/cli/runner.hpp"

int main(int argc, char** argv) { return spnls::cli::run(argc, argv); }
