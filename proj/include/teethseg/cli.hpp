#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace teethseg::cli {

/// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitDomainError = 1;
inline constexpr int kExitUsage = 2;

/// Runs the command line `args` (without the program name). Human or JSON
/// output goes to `out`; domain errors go to `err` as one JSON object per
/// line, usage problems as text.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace teethseg::cli
