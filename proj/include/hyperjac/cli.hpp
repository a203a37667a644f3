#ifndef HYPERJAC_CLI_HPP
#define HYPERJAC_CLI_HPP

#include <iosfwd>

namespace hyperjac {

enum ExitCode : int { exit_ok = 0, exit_mismatch = 1, exit_usage = 2 };

/// Subcommands eval-theta, period-matrix, gen-cubics and verify. JSON goes to
/// `out` (or the --output file), diagnostics to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hyperjac

#endif  // HYPERJAC_CLI_HPP
