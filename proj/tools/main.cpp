#include "dbel_cli.hpp"

int main(int argc, char** argv) { return dbel::cli::run(argc, argv); }
