#include "weberbits/cli.hpp"

int main(int argc, char** argv) { return weberbits::cli::main(argc, argv); }
