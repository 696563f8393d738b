#include "iwn/cli.hpp"

int main(int argc, char** argv) { return iwn::run_cli(argc, argv); }
