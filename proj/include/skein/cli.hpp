#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace skein {

/// Command-line entry point. Exit codes: 0 success, 1 domain error,
/// 2 parse error (file, inline expression, or command line).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}   // namespace skein
