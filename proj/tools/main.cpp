#include "adelim/cli.hpp"

int main(int argc, char** argv) { return adelim::cli::run(argc, argv); }
