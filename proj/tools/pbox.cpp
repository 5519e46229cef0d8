#include "pbox/cli.hpp"

int main(int argc, char** argv) { return pbox::cli::run(argc, argv); }
