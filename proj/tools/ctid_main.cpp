#include "ctid/cli.hpp"

int main(int argc, char** argv) { return ctid::cli::run(argc, argv); }
