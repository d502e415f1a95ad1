#include "lcc/cli.hpp"

int main(int argc, char **argv) { return lcc::lcc_lab_main(argc, argv); }
