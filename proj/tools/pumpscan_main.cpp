#include "pumpscan/cli.hpp"

int main(int argc, char** argv) { return pumpscan::cli::run(argc, argv); }
