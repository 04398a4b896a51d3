#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace arc {

/// Entry point of the `arc` command; argv[0] is the program name.
/// Returns 0 on success, 2 on malformed input files, 3 on invalid configuration.
int run_cli(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err);

}  // namespace arc
