#include "nlpc/commands.hpp"

int main(int argc, char** argv) { return nlpc::run_cli(argc, argv); }
