#include "cli_lib.hpp"

int main(int argc, char** argv) { return risklab::cli::dispatch(argc, argv); }
