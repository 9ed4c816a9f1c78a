#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tpo::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitViolations = 1;
inline constexpr int kExitInputError = 2;

/// Runs one command line (args[0] is the program name). Reports go to `out`,
/// diagnostics to `err`. Returns 0 on success or all traces compatible, 1 if
/// violations were found, 2 on bad input.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tpo::cli
