#pragma once

#include <iosfwd>
#include <string>

namespace thompson::cli {

// Exit codes: 0 = Yes / success, 1 = No / rejected, 2 = input error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// One command line without the program name, split like a shell would.
int run_line(const std::string& line, std::ostream& out, std::ostream& err);

}  // namespace thompson::cli
