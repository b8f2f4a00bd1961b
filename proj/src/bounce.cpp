#include "swdl/bounce.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>

namespace swdl {

namespace {

double wrap(double t, double period) {
    double w = std::fmod(t, period);
    if (w < 0.0) w += period;
    return w;
}

struct Schedule {
    double quarter;   // switching quarter period
    double ts;        // event switch time
    double phase_l1;  // window origin of the left module
    double phase_r1;  // window origin of the right module

    // Routing state of one line end at time t: 0 = reflecting (switch
    // edge), otherwise the connected port number. Windows alternate every
    // 2*quarter between the two ports of the module.
    int route(char line, bool right_side, double t) const {
        const double origin = right_side ? phase_r1 : phase_l1;
        const double local = wrap(t - origin, 4.0 * quarter);
        const bool first_half = local < 2.0 * quarter;
        const double into_window = first_half ? local : local - 2.0 * quarter;
        if (into_window < ts) return 0;
        if (!right_side) {
            if (line == 'A') return first_half ? 1 : 3;
            return first_half ? 3 : 1;
        }
        if (line == 'A') return first_half ? 2 : 4;
        return first_half ? 4 : 2;
    }

    // Times in (t0, t1) where the routing state can change.
    void cuts(bool right_side, double t0, double t1, std::vector<double>& out) const {
        const double origin = right_side ? phase_r1 : phase_l1;
        const double half = 2.0 * quarter;
        const auto k0 = static_cast<long long>(std::floor((t0 - origin) / half)) - 1;
        for (long long k = k0;; ++k) {
            const double edge = origin + static_cast<double>(k) * half;
            if (edge >= t1) break;
            if (edge > t0) out.push_back(edge);
            const double ramp_end = edge + ts;
            if (ramp_end > t0 && ramp_end < t1) out.push_back(ramp_end);
        }
    }
};

struct Flight {
    char line;
    bool forward;
    double t0, t1; // entry interval
    int origin_port;
};

} // namespace

BounceTrace bounce_trace(const CirculatorConfig& raw_cfg, int source_port, double pulse_width_s,
                         int n_periods, double event_switch_time_s) {
    const CirculatorConfig cfg = finalize_config(raw_cfg);
    if (source_port < 1 || source_port > 4)
        throw std::invalid_argument("bounce_trace: source_port must be 1..4");
    if (cfg.sw.ramp != SwitchRamp::Instant)
        throw std::invalid_argument("bounce_trace: requires Instant switches (event semantics)");
    if (cfg.line_a.variant == DelayLineVariant::Sampled ||
        cfg.line_b.variant == DelayLineVariant::Sampled)
        throw std::invalid_argument("bounce_trace: requires ideal delay-line variants");
    if (n_periods < 1) throw std::invalid_argument("bounce_trace: n_periods must be >= 1");

    const double quarter = 1.0 / (4.0 * cfg.f_mod_hz);
    if (!(pulse_width_s > 0.0 && pulse_width_s <= quarter / 4.0))
        throw std::invalid_argument("bounce_trace: pulse_width must be in (0, delta/4]");
    if (!(event_switch_time_s >= 0.0 && event_switch_time_s < 2.0 * quarter))
        throw std::invalid_argument("bounce_trace: event_switch_time must be in [0, 2*delta)");

    // Event routing assumes the complementary gate ladder.
    const auto& ph = cfg.control_phase_s;
    const double period = 4.0 * quarter;
    if (std::abs(wrap(ph[2] - ph[0], period) - 2.0 * quarter) > 1e-12 * period ||
        std::abs(wrap(ph[3] - ph[1], period) - 2.0 * quarter) > 1e-12 * period)
        throw std::invalid_argument("bounce_trace: requires complementary gate phases");

    const double delta_line = cfg.line_a.group_delay_s;
    if (std::abs(cfg.line_b.group_delay_s - delta_line) > 1e-15)
        throw std::invalid_argument("bounce_trace: lines must share one group delay");

    Schedule sched{quarter, event_switch_time_s, ph[0], ph[1]};
    const double horizon = static_cast<double>(n_periods) * period;

    BounceTrace trace;
    trace.delta_line_s = delta_line;
    trace.quarter_s = quarter;

    std::deque<Flight> work;

    // Launch one pulse at the start of each transmit window of the source
    // port. Left-module ports launch forward, right-module ports backward.
    const bool src_right = source_port == 2 || source_port == 4;
    const double origin = src_right ? ph[1] : ph[0];
    for (double w0 = origin - period; w0 < horizon; w0 += 2.0 * quarter) {
        if (w0 < 0.0) continue;
        const double t0 = w0 + event_switch_time_s; // edge slice handled below
        const double t1 = std::min(w0 + pulse_width_s, w0 + 2.0 * quarter);
        // Which line does this window connect to the source port?
        const int port_on_a = sched.route('A', src_right, w0 + event_switch_time_s + 1e-18 * quarter);
        const char line = port_on_a == source_port ? 'A' : 'B';
        if (event_switch_time_s > 0.0 && t0 > w0) {
            // Slice blocked by the launching switch edge.
            BounceSegment seg;
            seg.line = line;
            seg.forward = !src_right;
            seg.t_start_s = w0;
            seg.t_end_s = std::min(t0, t1);
            seg.origin_port = source_port;
            seg.fate = SegmentFate::Reflected;
            trace.segments.push_back(seg);
        }
        if (t0 < t1) work.push_back({line, !src_right, t0, t1, source_port});
    }

    while (!work.empty()) {
        const Flight fl = work.front();
        work.pop_front();
        if (fl.t0 >= horizon) {
            BounceSegment seg;
            seg.line = fl.line;
            seg.forward = fl.forward;
            seg.t_start_s = fl.t0;
            seg.t_end_s = fl.t1;
            seg.origin_port = fl.origin_port;
            seg.fate = SegmentFate::Absorbed;
            trace.segments.push_back(seg);
            continue;
        }
        const bool arrive_right = fl.forward;
        const double a0 = fl.t0 + delta_line;
        const double a1 = fl.t1 + delta_line;
        std::vector<double> cuts{a0, a1};
        sched.cuts(arrive_right, a0, a1, cuts);
        std::sort(cuts.begin(), cuts.end());
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
            const double s0 = cuts[i];
            const double s1 = cuts[i + 1];
            if (!(s1 > s0)) continue;
            const int port = sched.route(fl.line, arrive_right, 0.5 * (s0 + s1));
            BounceSegment seg;
            seg.line = fl.line;
            seg.forward = fl.forward;
            seg.t_start_s = s0 - delta_line;
            seg.t_end_s = s1 - delta_line;
            seg.origin_port = fl.origin_port;
            if (port != 0) {
                seg.fate = SegmentFate::Delivered;
                seg.delivered_port = port;
            } else {
                seg.fate = SegmentFate::Reflected;
                work.push_back({fl.line, !fl.forward, s0, s1, fl.origin_port});
            }
            trace.segments.push_back(seg);
        }
    }

    std::stable_sort(trace.segments.begin(), trace.segments.end(),
                     [](const BounceSegment& a, const BounceSegment& b) {
                         if (a.t_start_s != b.t_start_s) return a.t_start_s < b.t_start_s;
                         return a.line < b.line;
                     });
    return trace;
}

} // namespace swdl
