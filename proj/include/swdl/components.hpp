// Terminal-behavior models of the physical parts: switches with a finite
// linear-impedance rise time, delay lines (parametric or measured
// two-port tables), and L-C matching networks.

#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace swdl {

enum class SwitchRamp { Instant, LinearImpedance };
enum class SwitchPhase { On, Off, TurningOn, TurningOff };

struct SwitchModel {
    double r_on_ohm = 3.0;
    double r_off_ohm = 60e3;
    double t_switch_s = 6e-9;
    SwitchRamp ramp = SwitchRamp::LinearImpedance;

    void validate() const;
};

// Instantaneous switch impedance. During transitions the impedance varies
// linearly between r_off and r_on over t_switch; tau is the time since the
// transition edge.
double switch_impedance(const SwitchModel& sw, SwitchPhase phase, double tau_s);

struct TwoPortS {
    std::complex<double> s11, s12, s21, s22;
};

TwoPortS identity_two_port();
TwoPortS flip(const TwoPortS& s);

// Cascade of two two-ports sharing the same reference impedance (port 2 of
// a into port 1 of b). Throws on a non-convergent (|1 - s22a*s11b| ~ 0)
// junction.
TwoPortS cascade(const TwoPortS& a, const TwoPortS& b);

// Largest singular value; <= 1 for a passive two-port.
double max_singular_value(const TwoPortS& s);

struct SampledPoint {
    double f_hz;
    TwoPortS s;
};

enum class DelayLineVariant { IdealBandPass, IdealLowPass, Sampled };

struct DelayLineModel {
    DelayLineVariant variant = DelayLineVariant::IdealBandPass;
    double f_l_hz = 0.0;
    double f_u_hz = 0.0;
    double group_delay_s = 0.0;
    double passband_il_db = 0.0; // flat in-band loss
    std::vector<SampledPoint> sampled_response; // ascending in f, passive

    void validate() const;
};

// Strict point query. Ideal variants: S21 = S12 = 10^(-IL/20) *
// exp(-j*2*pi*f*delay) inside the open band, zero outside, S11 = S22 = 0.
// Sampled: linear interpolation in Re/Im; queries outside the table range
// throw.
TwoPortS frequency_response(const DelayLineModel& dl, double f_hz);

struct MatchingNetwork {
    double l_h = 280e-9; // series inductance, system side
    double c_f = 2.73e-12; // shunt capacitance, device side

    void validate() const;
};

// S-parameters of the L-section (series L from port 1, shunt C at port 2).
TwoPortS match_two_port(const MatchingNetwork& mn, double f_hz, double z0_ohm);

// Real FIR kernels for all four S-entries of a line, sampled at
// sample_rate. Built by Hermitian inverse DFT of the frequency response
// with a raised-cosine skirt of width taper_hz appended outside each band
// edge (an infinitely steep edge is not realizable in a causal kernel of
// delay group_delay; the skirt width controls the kernel ring-down and
// defaults to max(2% of band, 1.25/group_delay)).
//
// A line that is transparent up to the Nyquist frequency (ideal variant
// with f_u >= sample_rate/2) is built directly as a delayed unit impulse
// and requires group_delay to fall on the sample grid.
struct LineKernel {
    double sample_rate_hz = 0.0;
    std::vector<double> h11, h21, h12, h22; // equal lengths (n_taps)

    bool has_reflection() const;
};

LineKernel impulse_response(const DelayLineModel& dl, double sample_rate_hz, int n_taps,
                            double taper_hz = 0.0);

// Kernel of the line with optional matching networks cascaded onto each
// side (system-facing series L, device-facing shunt C).
LineKernel build_line_kernel(const DelayLineModel& dl,
                             const std::optional<MatchingNetwork>& match_left,
                             const std::optional<MatchingNetwork>& match_right,
                             double z0_ohm, double sample_rate_hz, int n_taps,
                             double taper_hz = 0.0);

// Tapered response used for kernel construction (exposed for tests).
TwoPortS kernel_response(const DelayLineModel& dl, double f_hz, double taper_hz);

double default_taper_hz(const DelayLineModel& dl);

bool is_transparent(const DelayLineModel& dl, double sample_rate_hz);

} // namespace swdl
