#pragma once

#include <string>
#include <vector>

namespace fermicov::cli {

/// Exit codes: 0 all checks passed, 1 a verification failed, 2 usage or
/// configuration error.
int run(int argc, const char* const* argv);

/// Same, with the arguments after the program name.
int run(const std::vector<std::string>& args);

}  // namespace fermicov::cli
