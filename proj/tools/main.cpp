#include "commands.hpp"

int main(int argc, char** argv) { return abt::cli::run(argc, argv); }
