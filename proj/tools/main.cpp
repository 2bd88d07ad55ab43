#include "deskmd/cli.hpp"

int main(int argc, char** argv) { return deskmd::run_cli(argc, argv); }
