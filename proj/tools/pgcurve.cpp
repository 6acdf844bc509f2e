#include "pgcurves/cli.hpp"

int main(int argc, char** argv) { return pgc::cli::run_cli(argc, argv); }
