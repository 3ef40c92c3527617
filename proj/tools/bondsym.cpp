#include "bondsym/cli.hpp"

int main(int argc, char** argv) { return bondsym::cli::run(argc, argv); }
