#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pownum::cli {

/// Dispatches one invocation (argv without the program name).
/// Exit codes: 0 success, 1 internal failure, 2 invalid arguments or domain
/// error, 3 undecided findings under --strict.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pownum::cli
