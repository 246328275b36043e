#include "cli.hpp"

int main(int argc, char** argv) { return fermicov::cli::run(argc, argv); }
