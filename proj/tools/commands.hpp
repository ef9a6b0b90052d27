#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace imfs::cli {

// Runs the command line `args` (args[0] is the program name). Data goes to
// files or `out`, diagnostics to `err`. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace imfs::cli
