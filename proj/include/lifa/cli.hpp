#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lifa::cli {

// Exit codes: 0 success, 1 usage/parse/config error, 2 fuel exhaustion.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lifa::cli
