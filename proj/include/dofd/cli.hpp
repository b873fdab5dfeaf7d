#pragma once

#include <ostream>

namespace dofd {

/// Parses argv and runs one subcommand. Returns 0 on success, 2 when the
/// arguments are invalid and 1 when the computation fails.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace dofd
