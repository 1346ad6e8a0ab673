#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hur::cli {

/// Exit codes shared by every subcommand.
enum ExitCode : int { kOk = 0, kUsage = 1, kVerdictFailed = 2 };

/// Entry point behind the hurlab executable. args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace hur::cli
