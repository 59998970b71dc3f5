#include "ergodic/cli.hpp"

int main(int argc, char** argv) { return ergodic::cli_main(argc, argv); }
