#pragma once

// Subcommand implementations behind the command-line front end. Each takes
// an already-loaded config and writes CSV (or a JSON report) to the given
// stream. Exit-code policy: 0 success, 1 validation failure, 2 bad config,
// 3 numeric guard; the mapping from exceptions to codes lives in the CLI
// entry point.

#include <iosfwd>
#include <optional>
#include <string>

#include "quditsqueeze/config.hpp"

namespace qsq {

// Single protocol run, one CSV row per trace sample.
// Columns: t_gamma,zeta,zeta_db,prep,f,od,final_map
void cmd_simulate(const RunConfigFile& cfg, std::ostream& out);

// Every sweep-axis combination in config order, traces concatenated in the
// same CSV schema as cmd_simulate. Points run on a worker pool; output
// order never depends on thread count.
void cmd_sweep(const RunConfigFile& cfg, std::ostream& out, int threads);

// Peak squeezing table over the sweep axes, rows sorted by f ascending,
// then preparation, both final maps per entry where defined.
// Columns: f,prep,final_map,peak_db,t_peak
// Requires at least 500 samples per trace.
void cmd_peak(const RunConfigFile& cfg, std::ostream& out, int threads);

// Invariant suites as a machine-readable JSON report. A config path may be
// given to vet its channel coefficients; semantic violations are reported
// as failed checks, not parse errors. Returns the process exit code.
int cmd_validate(const std::optional<std::string>& config_path,
                 std::ostream& out);

}  // namespace qsq
