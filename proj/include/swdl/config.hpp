// Flat key-value run configuration (dotted keys, strict schema). An empty
// file yields the default setup: 285 ns band-pass delay lines (150-160
// MHz, 4 dB), 3 ohm / 60 kohm switches with a 6 ns linear-impedance rise
// time, 50 ohm ports, and f_mod = 1/(4*delta).

#pragma once

#include "swdl/engine.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace swdl {

// Configuration / usage problem: maps to exit code 2.
struct ValidationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct RunConfig {
    CirculatorConfig circ;

    double source_power_dbm = -10.0;
    int source_port = 1;
    int observe_port = 2;
    double source_f_hz = 0.0; // 0 = center of the line passband

    std::vector<int> sweep_source_ports = {1, 2};
    double sweep_f_start_hz = 143e6;
    double sweep_f_stop_hz = 169e6;
    int sweep_f_points = 53;
    std::vector<double> sweep_dd_ratios;   // empty = fine default grid
    std::vector<double> sweep_ts_ratios;   // empty = fine default grid
    double bw_over_fm_max = 40.0;
    double bw_over_fm_step = 0.25;
    std::vector<double> carrier_positions = {0.5, 0.25, 0.05};

    double bounce_pulse_width_s = 0.0; // 0 = delta/8
    int bounce_n_periods = 3;
    double bounce_event_switch_time_s = 0.0;

    int spectrum_harmonics = 10;
    int analytic_harmonic_range = 4096;
};

RunConfig default_run_config();

// Parses a config file. Unknown or duplicate keys and invariant
// violations raise ValidationError naming the key.
RunConfig parse_config(const std::string& path);

// Parses from preloaded text (used by parse_config and the tests).
RunConfig parse_config_text(const std::string& text, const std::string& base_dir = ".");

} // namespace swdl
