#include "cvsnpm/cli.hpp"

int main(int argc, char** argv) { return cvsnpm::cli::run(argc, argv); }
