#include "cli.hpp"

int main(int argc, char** argv) { return commkit::cli::run(argc, argv); }
