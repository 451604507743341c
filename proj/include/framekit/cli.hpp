#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace framekit::cli {

enum ExitCode : int { Ok = 0, Violated = 1, InputFailure = 2, NothingApplicable = 3 };

/// `args` excludes the program name. Reports go to `out` unless -o is given.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace framekit::cli
