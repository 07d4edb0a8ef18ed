#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace dynclass::cli {

/// Run the command-line surface on the given arguments (without argv[0]).
/// Exit codes: 0 success, 1 usage or input error, 2 analysis failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace dynclass::cli
