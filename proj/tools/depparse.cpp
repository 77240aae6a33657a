#include "depparse/cli.hpp"

int main(int argc, char** argv) { return depparse::run_cli(argc, argv); }
