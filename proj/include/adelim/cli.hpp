#pragma once

#include <string>
#include <vector>

namespace adelim::cli {

/// Full command-line front end. Exit codes: 0 success, 1 numerical or I/O
/// failure, 2 usage error.
int run(int argc, const char* const* argv);

/// Same, for in-process callers; `args` excludes the program name.
int run(const std::vector<std::string>& args);

}  // namespace adelim::cli
