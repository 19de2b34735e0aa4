#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace qgh {

// Exit codes: 0 success, 1 a check failed, 2 bad input, 3 numerical failure.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qgh
