#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fewturn {

/// Runs the command-line tool. `args` excludes the program name. Returns the
/// process exit status: 0 success, 1 failure, 2 usage error.
int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace fewturn
