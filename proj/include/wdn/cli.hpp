#pragma once
// Command-line front end: gen-data, simulate, train, compare.

#include <string>
#include <vector>

namespace wdn {

// Returns the process exit code; usage errors are nonzero.
int run_cli(int argc, char** argv);
// Same, with arguments given without the program name.
int run_cli(const std::vector<std::string>& args);

}  // namespace wdn
