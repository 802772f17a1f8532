#include "wdn/cli.hpp"

int main(int argc, char** argv) { return wdn::run_cli(argc, argv); }
