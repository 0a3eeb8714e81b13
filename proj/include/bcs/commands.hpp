#pragma once

#include <ostream>

#include "bcs/bound_verifier.hpp"
#include "bcs/run_config.hpp"

namespace bcs {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitNumeric = 1;
inline constexpr int kExitConfig = 2;

// Each command assumes a validated config, writes results to config.out (or
// `out` when empty) and returns an exit code. Library exceptions propagate.
int cmd_tc(const RunConfig& config, std::ostream& out);
int cmd_sweep(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_verify(const RunConfig& config, std::ostream& out);
int cmd_kernel_eval(const RunConfig& config, std::ostream& out);

/// Validates and dispatches, mapping exceptions to exit codes: config and
/// precondition errors give 2, numeric failures give 1 with an error JSON on `out`.
int run_command(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Full command line: subcommand, optional --config file, flag overrides.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

nlohmann::ordered_json report_json(const BoundReport& report, const std::string& digest);

}  // namespace bcs
