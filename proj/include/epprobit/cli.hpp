#pragma once

#include <iosfwd>

namespace epprobit {

/// Entry point of the `epprobit` command-line tool.
///
/// Subcommands: simulate, fit, compare, benchmark. Returns 0 on success
/// (including unconverged fits), 1 on runtime or data errors and 2 on usage
/// errors.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace epprobit
