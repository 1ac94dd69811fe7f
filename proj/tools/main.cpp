#include "kolflow/cli.hpp"

int main(int argc, char** argv) { return kolflow::run_cli(argc, argv); }
