#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace zerocorr {

/// Exit codes of the command-line front end.
enum ExitCode : int {
    exit_success = 0,
    exit_validation_failed = 1,
    exit_usage = 2,
    exit_backend = 3,
};

/// Runs `zerocorr <command> [config.json] [--set key=value]... [--workers N] [--out path]`.
/// Reports go to `out` unless an output path is configured; messages go to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Same, with the arguments after the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace zerocorr
