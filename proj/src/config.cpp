#include "swdl/config.hpp"

#include "swdl/touchstone.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace swdl {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing characters");
        return x;
    } catch (const std::exception&) {
        throw ValidationError("config key '" + key + "': expected a number, got '" + v + "'");
    }
}

int parse_int(const std::string& key, const std::string& v) {
    const double x = parse_double(key, v);
    if (std::abs(x - std::round(x)) > 1e-9)
        throw ValidationError("config key '" + key + "': expected an integer, got '" + v + "'");
    return static_cast<int>(std::llround(x));
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw ValidationError("config key '" + key + "': expected true/false, got '" + v + "'");
}

std::vector<double> parse_list(const std::string& key, const std::string& v) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(parse_double(key, item));
    }
    if (out.empty()) throw ValidationError("config key '" + key + "': empty list");
    return out;
}

} // namespace

RunConfig default_run_config() {
    RunConfig rc;
    rc.circ.delta_s = 285e-9;
    rc.circ.f_mod_hz = 0.0; // derived: 1/(4*delta)
    rc.circ.z0_ohm = 50.0;
    rc.circ.sw.r_on_ohm = 3.0;
    rc.circ.sw.r_off_ohm = 60e3;
    rc.circ.sw.t_switch_s = 6e-9;
    rc.circ.sw.ramp = SwitchRamp::LinearImpedance;
    rc.circ.line_a.variant = DelayLineVariant::IdealBandPass;
    rc.circ.line_a.f_l_hz = 150e6;
    rc.circ.line_a.f_u_hz = 160e6;
    rc.circ.line_a.passband_il_db = 4.0;
    rc.circ.line_a.group_delay_s = 285e-9;
    rc.circ.line_b = rc.circ.line_a;
    return rc;
}

RunConfig parse_config_text(const std::string& text, const std::string& base_dir) {
    RunConfig rc = default_run_config();

    bool ramp_instant = false;
    bool t_switch_set = false;
    double t_switch_value = rc.circ.sw.t_switch_s;
    std::string line_variant = "bandpass";
    std::string s2p_path;
    double line_group_delay = 0.0; // 0 = delta
    bool matching_enabled = false;
    MatchingNetwork mn;

    using Handler = std::function<void(const std::string&, const std::string&)>;
    const std::map<std::string, Handler> handlers = {
        {"delta_s", [&](const std::string& k, const std::string& v) { rc.circ.delta_s = parse_double(k, v); }},
        {"f_mod_hz", [&](const std::string& k, const std::string& v) { rc.circ.f_mod_hz = parse_double(k, v); }},
        {"z0_ohm", [&](const std::string& k, const std::string& v) { rc.circ.z0_ohm = parse_double(k, v); }},
        {"sample_rate_hz", [&](const std::string& k, const std::string& v) { rc.circ.sample_rate_hz = parse_double(k, v); }},
        {"shunt_switches", [&](const std::string& k, const std::string& v) { rc.circ.shunt_switches = parse_bool(k, v); }},
        {"all_switches_on", [&](const std::string& k, const std::string& v) { rc.circ.all_switches_on = parse_bool(k, v); }},
        {"line_b_blocked", [&](const std::string& k, const std::string& v) { rc.circ.line_b_blocked = parse_bool(k, v); }},
        {"n_discard_periods", [&](const std::string& k, const std::string& v) { rc.circ.n_discard_periods = parse_int(k, v); }},
        {"n_analyze_periods", [&](const std::string& k, const std::string& v) { rc.circ.n_analyze_periods = parse_int(k, v); }},
        {"kernel_taps", [&](const std::string& k, const std::string& v) { rc.circ.kernel_taps = parse_int(k, v); }},
        {"taper_hz", [&](const std::string& k, const std::string& v) { rc.circ.taper_hz = parse_double(k, v); }},
        {"control_phase_s", [&](const std::string& k, const std::string& v) {
             const auto vals = parse_list(k, v);
             if (vals.size() != 4) throw ValidationError("config key '" + k + "': expected 4 values");
             for (int i = 0; i < 4; ++i) rc.circ.control_phase_s[i] = vals[i];
         }},
        {"switch.r_on_ohm", [&](const std::string& k, const std::string& v) { rc.circ.sw.r_on_ohm = parse_double(k, v); }},
        {"switch.r_off_ohm", [&](const std::string& k, const std::string& v) { rc.circ.sw.r_off_ohm = parse_double(k, v); }},
        {"switch.t_switch_s", [&](const std::string& k, const std::string& v) {
             t_switch_value = parse_double(k, v);
             t_switch_set = true;
         }},
        {"switch.ramp", [&](const std::string& k, const std::string& v) {
             if (v == "instant") ramp_instant = true;
             else if (v == "linear") ramp_instant = false;
             else throw ValidationError("config key '" + k + "': expected linear|instant");
         }},
        {"delay_line.variant", [&](const std::string& k, const std::string& v) {
             if (v != "bandpass" && v != "lowpass" && v != "sampled" && v != "delay")
                 throw ValidationError("config key '" + k + "': expected bandpass|lowpass|sampled|delay");
             line_variant = v;
         }},
        {"delay_line.f_l_hz", [&](const std::string& k, const std::string& v) { rc.circ.line_a.f_l_hz = parse_double(k, v); }},
        {"delay_line.f_u_hz", [&](const std::string& k, const std::string& v) { rc.circ.line_a.f_u_hz = parse_double(k, v); }},
        {"delay_line.il_db", [&](const std::string& k, const std::string& v) { rc.circ.line_a.passband_il_db = parse_double(k, v); }},
        {"delay_line.group_delay_s", [&](const std::string& k, const std::string& v) { line_group_delay = parse_double(k, v); }},
        {"delay_line.s2p_path", [&](const std::string& k, const std::string& v) {
             (void)k;
             s2p_path = v;
         }},
        {"matching.enabled", [&](const std::string& k, const std::string& v) { matching_enabled = parse_bool(k, v); }},
        {"matching.l_h", [&](const std::string& k, const std::string& v) { mn.l_h = parse_double(k, v); }},
        {"matching.c_f", [&](const std::string& k, const std::string& v) { mn.c_f = parse_double(k, v); }},
        {"source.power_dbm", [&](const std::string& k, const std::string& v) { rc.source_power_dbm = parse_double(k, v); }},
        {"source.port", [&](const std::string& k, const std::string& v) { rc.source_port = parse_int(k, v); }},
        {"source.f_hz", [&](const std::string& k, const std::string& v) { rc.source_f_hz = parse_double(k, v); }},
        {"observe.port", [&](const std::string& k, const std::string& v) { rc.observe_port = parse_int(k, v); }},
        {"sweep.source_ports", [&](const std::string& k, const std::string& v) {
             rc.sweep_source_ports.clear();
             for (double x : parse_list(k, v)) rc.sweep_source_ports.push_back(static_cast<int>(x));
         }},
        {"sweep.f_start_hz", [&](const std::string& k, const std::string& v) { rc.sweep_f_start_hz = parse_double(k, v); }},
        {"sweep.f_stop_hz", [&](const std::string& k, const std::string& v) { rc.sweep_f_stop_hz = parse_double(k, v); }},
        {"sweep.f_points", [&](const std::string& k, const std::string& v) { rc.sweep_f_points = parse_int(k, v); }},
        {"sweep.dd_ratios", [&](const std::string& k, const std::string& v) { rc.sweep_dd_ratios = parse_list(k, v); }},
        {"sweep.ts_ratios", [&](const std::string& k, const std::string& v) { rc.sweep_ts_ratios = parse_list(k, v); }},
        {"sweep.bw_over_fm_max", [&](const std::string& k, const std::string& v) { rc.bw_over_fm_max = parse_double(k, v); }},
        {"sweep.bw_over_fm_step", [&](const std::string& k, const std::string& v) { rc.bw_over_fm_step = parse_double(k, v); }},
        {"sweep.carrier_positions", [&](const std::string& k, const std::string& v) { rc.carrier_positions = parse_list(k, v); }},
        {"bounce.pulse_width_s", [&](const std::string& k, const std::string& v) { rc.bounce_pulse_width_s = parse_double(k, v); }},
        {"bounce.n_periods", [&](const std::string& k, const std::string& v) { rc.bounce_n_periods = parse_int(k, v); }},
        {"bounce.event_switch_time_s", [&](const std::string& k, const std::string& v) { rc.bounce_event_switch_time_s = parse_double(k, v); }},
        {"spectrum.n_harmonics", [&](const std::string& k, const std::string& v) { rc.spectrum_harmonics = parse_int(k, v); }},
        {"analytic.harmonic_range", [&](const std::string& k, const std::string& v) { rc.analytic_harmonic_range = parse_int(k, v); }},
    };

    std::set<std::string> seen;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string line = trim(raw);
        if (line.empty() || line[0] == '#' || line[0] == ';') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ValidationError("config line " + std::to_string(line_no) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const auto it = handlers.find(key);
        if (it == handlers.end())
            throw ValidationError("unknown config key '" + key + "' (line " + std::to_string(line_no) + ")");
        if (!seen.insert(key).second)
            throw ValidationError("duplicate config key '" + key + "'");
        it->second(key, value);
    }

    // Assemble the switch model.
    rc.circ.sw.ramp = ramp_instant ? SwitchRamp::Instant : SwitchRamp::LinearImpedance;
    if (ramp_instant && !t_switch_set) t_switch_value = 0.0;
    rc.circ.sw.t_switch_s = t_switch_value;

    // Assemble the delay lines (one shared description).
    DelayLineModel& la = rc.circ.line_a;
    if (line_variant == "lowpass") {
        la.variant = DelayLineVariant::IdealLowPass;
        la.f_l_hz = 0.0;
    } else if (line_variant == "delay") {
        la.variant = DelayLineVariant::IdealLowPass;
        la.f_l_hz = 0.0;
        la.f_u_hz = 1e18; // transparent to any Nyquist
    } else if (line_variant == "sampled") {
        if (s2p_path.empty())
            throw ValidationError("delay_line.variant = sampled requires delay_line.s2p_path");
        std::filesystem::path p(s2p_path);
        if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
        if (!std::filesystem::exists(p))
            throw ValidationError("delay_line.s2p_path: file not found: " + p.string());
        la.variant = DelayLineVariant::Sampled;
        la.sampled_response = load_touchstone(p.string()).points;
    }
    la.group_delay_s = line_group_delay > 0.0 ? line_group_delay : rc.circ.delta_s;
    rc.circ.line_b = la;

    if (matching_enabled)
        for (auto& m : rc.circ.matching) m = mn;

    // Cross-field checks that hold for every command.
    try {
        if (!rc.sweep_dd_ratios.empty())
            for (double d : rc.sweep_dd_ratios) (void)deviation_il(d);
        if (!rc.sweep_ts_ratios.empty())
            for (double x : rc.sweep_ts_ratios) (void)switch_time_effects(x);
        for (double c : rc.carrier_positions)
            if (!(c >= 0.0 && c <= 1.0))
                throw std::invalid_argument("sweep.carrier_positions: values must be in [0, 1]");
        if (rc.sweep_f_points < 1) throw std::invalid_argument("sweep.f_points must be >= 1");
        if (rc.source_port < 1 || rc.source_port > 4 || rc.observe_port < 1 || rc.observe_port > 4)
            throw std::invalid_argument("ports must be 1..4");
        (void)finalize_config(rc.circ);
    } catch (const ValidationError&) {
        throw;
    } catch (const std::invalid_argument& e) {
        throw ValidationError(e.what());
    }
    return rc;
}

RunConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open config file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string dir = std::filesystem::path(path).parent_path().string();
    return parse_config_text(buf.str(), dir.empty() ? "." : dir);
}

} // namespace swdl
