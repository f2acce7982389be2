#include "scarlab/cli.hpp"

int main(int argc, char** argv) { return scarlab::cli::run(argc, argv); }
