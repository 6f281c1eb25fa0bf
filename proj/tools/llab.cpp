#include "cli.hpp"

int main(int argc, char** argv) { return llab::cli::dispatch(argc, argv); }
