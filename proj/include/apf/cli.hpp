#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace apf {

// Command-line front end (list / run / compare / validate).  Returns the
// process exit code: 0 success or goal reached, 2 configuration or usage
// error, 3 physical collision, 4 stall or timeout.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// Same, for tests: args exclude the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace apf
