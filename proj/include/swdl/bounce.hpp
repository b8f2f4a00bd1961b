// Event-based bounce-diagram tracer. Follows pulse segments through the
// delay lines with ideal (instant) switches, recording where each segment
// is delivered, reflected, or truncated by the trace horizon.
//
// A nonzero event_switch_time models switching edges event-wise: the first
// event_switch_time of every gate window reflects instead of routing
// (reflected segments re-enter the line and keep bouncing). Configs with
// LinearImpedance switch ramps are rejected; trace semantics are
// event-based.

#pragma once

#include "swdl/engine.hpp"

#include <vector>

namespace swdl {

enum class SegmentFate { Delivered, Reflected, Absorbed };

struct BounceSegment {
    char line = 'A';
    bool forward = true;     // true: left -> right
    double t_start_s = 0.0;  // pulse edges entering the line
    double t_end_s = 0.0;
    double amplitude = 1.0;
    int origin_port = 1;
    SegmentFate fate = SegmentFate::Delivered;
    int delivered_port = 0;  // set when fate == Delivered
};

struct BounceTrace {
    double delta_line_s = 0.0;    // propagation delay (arrival = t_start + delta_line)
    double quarter_s = 0.0;       // switching quarter period
    std::vector<BounceSegment> segments;
};

BounceTrace bounce_trace(const CirculatorConfig& cfg, int source_port, double pulse_width_s,
                         int n_periods, double event_switch_time_s = 0.0);

} // namespace swdl
