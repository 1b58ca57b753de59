#include "commands.hpp"

int main(int argc, char** argv) { return paretohj::cli::run(argc, argv); }
