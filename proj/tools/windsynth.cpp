#include "commands.hpp"

int main(int argc, char** argv) { return windsynth::cli::run(argc, argv); }
