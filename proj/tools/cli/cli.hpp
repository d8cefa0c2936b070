#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace mft::cli {

enum ExitCode : int { ok = 0, mismatch = 1, usage = 2 };

/// Runs one subcommand. Exit codes: 0 success, 1 mismatch / inadmissible /
/// exhausted search, 2 usage error.
int parse_and_dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int parse_and_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace mft::cli
