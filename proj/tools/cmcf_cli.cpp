#include "cmcf/cli.hpp"

int main(int argc, char** argv) { return cmcf::run_cli(argc, argv); }
