#include "spdelab/cli.hpp"

int main(int argc, char** argv) { return spdelab::run_command(argc, argv); }
