#include "corrtherm/cli.hpp"

int main(int argc, char** argv) { return corrtherm::cli::run(argc, argv); }
