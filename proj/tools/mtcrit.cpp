#include "mtcrit/cli.hpp"

int main(int argc, char** argv) { return mtc::run_cli(argc, argv); }
