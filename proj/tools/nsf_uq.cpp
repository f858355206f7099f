#include "nsf/cli.hpp"

int main(int argc, char** argv) { return nsf::run_cli(argc, argv); }
