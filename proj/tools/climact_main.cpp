#include "climact/cli.hpp"

int main(int argc, char** argv) { return climact::run_cli(argc, argv); }
