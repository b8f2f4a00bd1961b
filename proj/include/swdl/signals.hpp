// Periodic switch-control waveforms and their Fourier series.
//
// Four gating signals (L1, R1, L2, R2) share a period of 4*delta and are
// offset from each other by delta. Three derived transmission waveforms
// describe the net gating seen by a through path: T1/T2 for a line whose
// delay deviates from the quarter switching period, T3 for switches with a
// finite rise time. T1/T2/T3 have period 2*delta.

#pragma once

#include <complex>
#include <map>
#include <vector>

namespace swdl {

enum class WaveformKind { L1, R1, L2, R2, T1, T2, T3 };

struct ControlWaveform {
    WaveformKind kind = WaveformKind::L1;
    double delta_s = 0.0;           // quarter switching period, > 0
    double delay_deviation_s = 0.0; // may be negative; used by T1/T2
    double switch_time_s = 0.0;     // >= 0; used by T3
    double amplitude = 1.0;         // on-value

    // Throws std::invalid_argument when an invariant is violated.
    void validate() const;

    double period_s() const;
};

// Exact evaluation of the gating waveform at time t. Step edges belong to
// the interval they open: a rising edge at t0 evaluates to the on-value.
double control_value(const ControlWaveform& w, double t_s);

// Uniformly sampled waveform, duration must be an integer number of
// periods (keeps the FFT oracle leakage-free). sample_rate * 4*delta must
// be at least 64 so edges are resolved.
std::vector<double> sample_waveform(const ControlWaveform& w, double sample_rate_hz,
                                    double duration_s);

enum class FourierKind { A, T1C, T2C, T3C };

// Closed-form complex Fourier coefficient of the corresponding waveform:
//   A   -> 50% duty gate, period 4*delta, on-window [0, 2*delta)
//   T1C -> period 2*delta, on-window [|dd|, 2*delta)
//   T2C -> complement of T1C, on-window [0, |dd|)
//   T3C -> period 2*delta, on-window [t_s, 2*delta)
// where dd = |delay_deviation| and windows are given from the period start.
// Coefficients are those of the unit-amplitude window integral, so the DFT
// of sample_waveform reproduces them exactly (Hermitian in n).
//
// T3C uses the through-path convention: the two delay-line branches of a
// circulator carry complementary half-duty gates whose sum telescopes into
// a single 2*delta-periodic window with DC value (1 - t_s/2delta). The
// per-branch gate alone has DC value (1 - t_s/2delta)/2; see the tests for
// the factor-of-two evidence.
std::complex<double> fourier_coefficient(FourierKind kind, int n, double delta_s,
                                         double delay_deviation_s, double switch_time_s);

struct FourierSeries {
    FourierKind kind = FourierKind::A;
    double fundamental_hz = 0.0; // f_m for kind A, 2*f_m for T kinds
    int n_max = 0;
    std::map<int, std::complex<double>> coefficients;
};

FourierSeries fourier_series(FourierKind kind, double delta_s, double delay_deviation_s,
                             double switch_time_s, int n_max = 200);

// 1 - sum over |n| <= n_max of 2|a_n|^2, normalized by the waveform's mean
// square. Approaches 0 as n_max grows.
double parseval_residual(const FourierSeries& series);

} // namespace swdl
