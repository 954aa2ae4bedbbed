#include "dofatlas/cli.hpp"

int main(int argc, char** argv) { return dofatlas::cli::run(argc, argv); }
