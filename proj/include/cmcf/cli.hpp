#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cmcf {

/// Exit codes: 0 success, 1 invalid input (config, files, arguments),
/// 2 solver abort.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitSolver = 2;

/// Subcommands: run <config>, oracle, examples, convergence.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_cli(int argc, char** argv);

}  // namespace cmcf
