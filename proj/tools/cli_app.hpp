#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace icboot::cli {

// Runs one command line (without the program name). Returns the exit status:
// 0 success, 1 input error, 2 numerical failure.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace icboot::cli
