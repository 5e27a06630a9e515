#pragma once

#include <iosfwd>

namespace odlab {

enum ExitCode { exit_ok = 0, exit_check_failed = 1, exit_usage = 2 };

// full command line front end; documents go to out, diagnostics to err
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace odlab
