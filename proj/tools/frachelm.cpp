#include "frachelm/cli.hpp"

int main(int argc, char** argv) { return frachelm::run_cli(argc, argv); }
