#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace vkge::cli {

// Runs `vkge <args...>` (args excludes the program name) and returns the
// process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace vkge::cli
