#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace pslab::cli {

// Runs one pslab invocation (without the program name). Writes reports to
// `out` and errors to `err`; returns the process exit code.
//
// Exit codes: 0 success / holds / search exhausted; 1 fails / fault-dominant
// / witness found; 2 parse or usage error; 3 unknown verdict.
int dispatch(std::vector<std::string> args, std::ostream& out, std::ostream& err);

} // namespace pslab::cli
