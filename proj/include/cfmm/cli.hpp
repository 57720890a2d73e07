#pragma once

#include <iosfwd>

namespace cfmm {

enum ExitCode : int {
    exit_ok = 0,
    exit_input = 2,
    exit_truncation = 3,
    exit_sim_bound = 4,
    exit_verify = 5,
};

/// Entry point of the command-line tool; report text goes to `out`, diagnostics to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cfmm
