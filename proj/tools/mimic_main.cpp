#include "mimic/cli.hpp"

int main(int argc, char** argv) { return mimic::cli::run(argc, argv); }
