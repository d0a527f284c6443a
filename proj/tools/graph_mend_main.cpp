#include <graphmend/cli.hpp>

int main(int argc, char** argv) { return graphmend::run_cli(argc, argv); }
