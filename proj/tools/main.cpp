#include "sympflow/cli.hpp"

int main(int argc, char** argv) { return sympflow::run_cli(argc, argv); }
