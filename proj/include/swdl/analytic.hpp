// Closed-form performance predictions for the switched-delay-line
// circulator: filtering insertion loss of band-limited delay lines,
// delay-deviation loss/isolation, switching-time loss, intra-modulated
// tone levels, and the ideal circulation S-matrix.

#pragma once

#include <array>
#include <complex>
#include <map>
#include <vector>

namespace swdl {

// Saturation sentinel used in place of +/- infinity so emitted tables stay
// numeric.
inline constexpr double kSaturatedDb = 300.0;

struct TonePlan {
    double f_s_hz = 0.0;    // input carrier
    double f_m_hz = 0.0;    // modulation frequency, 1/(4*delta)
    int harmonic_range = 200; // tones considered: |n| <= harmonic_range

    void validate() const;
};

enum class PassbandShape { BandPass, LowPass };

// Perfect-filter passband: unity inside (f_l, f_u), zero outside. Band
// edges are open; a tone exactly on an edge is excluded.
struct PassbandSpec {
    PassbandShape shape = PassbandShape::BandPass;
    double f_l_hz = 0.0;
    double f_u_hz = 0.0;

    void validate() const;
    bool contains(double f_hz) const; // true when f or -f lies in the open band
};

// Insertion loss from tones lost to the delay line's passband,
//   IL = -10*log10( sum over passing n of 2|a_n|^2 ),
// where a tone passes when f_s + n*f_m falls in (f_l, f_u) or in
// (-f_u, -f_l). Returns kSaturatedDb when no tone passes. Note the
// through-path main-tone *amplitude* ratio equals the same sum; this
// function reports the published -10*log10 convention (see
// il_filtering_amplitude_db).
double il_filtering(const TonePlan& plan, const PassbandSpec& band);

// Same tone sum reported as an amplitude ratio, -20*log10(sum). This is
// what a time-domain simulation of the circulator converges to.
double il_filtering_amplitude_db(const TonePlan& plan, const PassbandSpec& band);

struct IlCurvePoint {
    double bw_over_fm;
    double il_db;
};

// IL versus normalized bandwidth BW/f_m for a carrier placed at a fixed
// fraction of the band. For BandPass the band is centered on plan.f_s; for
// LowPass the band is (0, BW). carrier_position in [0,1] maps the carrier
// from the lower to the upper band edge.
std::vector<IlCurvePoint> il_curve(const TonePlan& plan, PassbandShape shape,
                                   const std::vector<double>& normalized_bw_grid,
                                   double carrier_position);

// Delay-deviation loss and isolation, dd_ratio = |delta_deviation|/(2*delta):
//   IL = -20*log10(1 - dd_ratio),  Isolation = -20*log10(dd_ratio).
double deviation_il(double dd_ratio);
double deviation_isolation(double dd_ratio);

enum class PortRole { Through, Isolated };

// Level of intra-modulated tone n (offset n * 2*f_m) relative to the main
// tone of the same port, in dBc.
double modulated_tone_level(PortRole port, int n, double dd_ratio);

struct SwitchTimeEffects {
    double il_db = 0.0;                 // extra through-path loss
    std::map<int, double> tone_levels_dbc; // n -> dBc vs the main tone
};

// Through-path effects of a finite switch time, ts_ratio = t_s/(2*delta).
// The through path sees a 2*delta-periodic gate with on-fraction
// (1 - ts_ratio); its DC term sets the extra IL and its harmonics the tone
// levels.
SwitchTimeEffects switch_time_effects(double ts_ratio, int n_max = 3);

using SMatrix4 = std::array<std::array<std::complex<double>, 4>, 4>;

// Ideal circulator S-matrix: S21 = S32 = S43 = S14 = exp(-j*2*pi*f*delta),
// all other entries zero (1-based ports, circulation 1->2->3->4->1).
SMatrix4 ideal_smatrix(double f_hz, double delta_s);

} // namespace swdl
