#include "ctinfo/cli.hpp"

int main(int argc, char** argv) { return ctinfo::cli::ctinfo_main(argc, argv); }
