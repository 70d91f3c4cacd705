#include "dcone/cli.hpp"

int main(int argc, char** argv) { return dcone::cli::run(argc, argv); }
