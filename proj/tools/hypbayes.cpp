#include "hypbayes/cli.hpp"

int main(int argc, char** argv) { return hypbayes::cli::run(argc, argv); }
