#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace h4free {

/// Runs the command line `args` (without the program name).
/// Exit codes: 0 pass or expected outcome, 1 fail, 2 usage or input error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace h4free
