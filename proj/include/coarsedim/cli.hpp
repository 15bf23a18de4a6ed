#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace coarsedim {

// Exit statuses of run().
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailed = 1;  // a verification or precondition check failed
inline constexpr int kExitUsage = 2;   // bad arguments or unreadable input

// Runs one command line (without the program name). The run report goes to
// `out` and diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace coarsedim
