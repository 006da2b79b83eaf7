#include "odmrsim/cli.hpp"

int main(int argc, char** argv) { return odmrsim::run_cli(argc, argv); }
