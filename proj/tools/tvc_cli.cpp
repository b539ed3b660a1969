#include "tvc/cli.hpp"

int main(int argc, char** argv) { return tvc::run_cli(argc, argv); }
