// CLI command implementations: analytic sweeps, simulations, and the
// canned reproduction runs. Each command emits CSV (and optionally SVG)
// into the output directory; partial files are removed on failure.

#pragma once

#include "swdl/config.hpp"

#include <string>
#include <vector>

namespace swdl {

struct CommandOptions {
    std::string out_dir = ".";
    int jobs = 1;
    bool emit_csv = true;
    bool emit_svg = false;
};

const std::vector<std::string>& command_names();

// Returns a process exit code: 0 success, 2 validation error, 3 simulation
// abort. Errors are reported on stderr.
int run_command(const std::string& command, const RunConfig& cfg, const CommandOptions& opts);

struct Fig17Summary {
    double min_il_db = 0.0;
    double f_min_il_hz = 0.0;
    double center_hz = 0.0;
    double bw_hz = 0.0;
    double min_isolation_in_band_db = 0.0;
};

// Shared by the repro-fig17 command and the acceptance suite.
Fig17Summary run_fig17(const RunConfig& cfg, const CommandOptions& opts);

} // namespace swdl
