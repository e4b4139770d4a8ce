#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace codesurvey {

// Exit codes (frozen): 0 success, 1 validation check failure, 2 usage or
// config error, 3 runtime error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace codesurvey
