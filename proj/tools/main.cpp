#include "pssc/cli.hpp"

int main(int argc, char** argv) { return pssc::cli_main(argc, argv); }
