#include "swdl/signals.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace swdl {

namespace {

// Heaviside step with H(0) = 1.
int heaviside(double x) { return x >= 0.0 ? 1 : 0; }

// On-window of the waveform, expressed as [start, end) fractions of its
// own period.
struct Window {
    double start;
    double end;
    double period_s;
};

Window window_of(const ControlWaveform& w) {
    const double d4 = 4.0 * w.delta_s;
    const double d2 = 2.0 * w.delta_s;
    const double dd = std::abs(w.delay_deviation_s) / d2;
    const double ts = w.switch_time_s / d2;
    switch (w.kind) {
        case WaveformKind::L1: return {0.00, 0.50, d4};
        case WaveformKind::R1: return {0.25, 0.75, d4};
        case WaveformKind::L2: return {0.50, 1.00, d4};
        case WaveformKind::R2: return {0.75, 1.25, d4};
        case WaveformKind::T1: return {dd, 1.0, d2};
        case WaveformKind::T2: return {0.0, dd, d2};
        case WaveformKind::T3: return {ts, 1.0, d2};
    }
    throw std::logic_error("unreachable waveform kind");
}

} // namespace

void ControlWaveform::validate() const {
    if (!(delta_s > 0.0) || !std::isfinite(delta_s))
        throw std::invalid_argument("ControlWaveform: delta must be positive and finite");
    if (!std::isfinite(delay_deviation_s) || std::abs(delay_deviation_s) >= 2.0 * delta_s)
        throw std::invalid_argument("ControlWaveform: |delay_deviation| must be < 2*delta");
    if (!std::isfinite(switch_time_s) || switch_time_s < 0.0 || switch_time_s >= 2.0 * delta_s)
        throw std::invalid_argument("ControlWaveform: switch_time must be in [0, 2*delta)");
    if (!std::isfinite(amplitude))
        throw std::invalid_argument("ControlWaveform: amplitude must be finite");
}

double ControlWaveform::period_s() const {
    switch (kind) {
        case WaveformKind::L1:
        case WaveformKind::R1:
        case WaveformKind::L2:
        case WaveformKind::R2: return 4.0 * delta_s;
        default: return 2.0 * delta_s;
    }
}

double control_value(const ControlWaveform& w, double t_s) {
    w.validate();
    if (!std::isfinite(t_s)) throw std::invalid_argument("control_value: t must be finite");

    const Window win = window_of(w);
    const double u = t_s / win.period_s;
    // Each term of the Heaviside sum has bounded support, so only indices
    // near floor(u) can contribute.
    const long n0 = static_cast<long>(std::floor(u));
    int acc = 0;
    for (long n = n0 - 2; n <= n0 + 2; ++n) {
        acc += heaviside(u - win.start - static_cast<double>(n));
        acc -= heaviside(u - win.end - static_cast<double>(n));
    }
    return w.amplitude * static_cast<double>(acc);
}

std::vector<double> sample_waveform(const ControlWaveform& w, double sample_rate_hz,
                                    double duration_s) {
    w.validate();
    if (!(sample_rate_hz > 0.0) || !std::isfinite(sample_rate_hz))
        throw std::invalid_argument("sample_waveform: sample_rate must be positive");
    if (sample_rate_hz * 4.0 * w.delta_s < 64.0)
        throw std::invalid_argument("sample_waveform: sample_rate*4*delta must be >= 64");

    const double period = w.period_s();
    const double k = duration_s / period;
    if (!(duration_s > 0.0) || std::abs(k - std::round(k)) > 1e-9 * std::max(1.0, k))
        throw std::invalid_argument("sample_waveform: duration must be an integer number of periods");

    const auto n = static_cast<std::size_t>(std::llround(duration_s * sample_rate_hz));
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = control_value(w, static_cast<double>(i) / sample_rate_hz);
    return out;
}

std::complex<double> fourier_coefficient(FourierKind kind, int n, double delta_s,
                                         double delay_deviation_s, double switch_time_s) {
    ControlWaveform w;
    w.delta_s = delta_s;
    w.delay_deviation_s = delay_deviation_s;
    w.switch_time_s = switch_time_s;
    switch (kind) {
        case FourierKind::A: w.kind = WaveformKind::L1; break;
        case FourierKind::T1C: w.kind = WaveformKind::T1; break;
        case FourierKind::T2C: w.kind = WaveformKind::T2; break;
        case FourierKind::T3C: w.kind = WaveformKind::T3; break;
    }
    w.validate();

    const Window win = window_of(w);
    if (n == 0) return {win.end - win.start, 0.0};
    using namespace std::complex_literals;
    const double two_pi_n = 2.0 * std::numbers::pi * static_cast<double>(n);
    const std::complex<double> es = std::exp(-1i * two_pi_n * win.start);
    const std::complex<double> ee = std::exp(-1i * two_pi_n * win.end);
    return (es - ee) / (1i * two_pi_n);
}

FourierSeries fourier_series(FourierKind kind, double delta_s, double delay_deviation_s,
                             double switch_time_s, int n_max) {
    if (n_max < 1) throw std::invalid_argument("fourier_series: n_max must be >= 1");
    FourierSeries s;
    s.kind = kind;
    s.fundamental_hz = (kind == FourierKind::A) ? 1.0 / (4.0 * delta_s) : 1.0 / (2.0 * delta_s);
    s.n_max = n_max;
    for (int n = -n_max; n <= n_max; ++n)
        s.coefficients[n] = fourier_coefficient(kind, n, delta_s, delay_deviation_s, switch_time_s);
    return s;
}

double parseval_residual(const FourierSeries& series) {
    const double duty = series.coefficients.at(0).real();
    if (duty <= 0.0) return 0.0;
    double acc = 0.0;
    for (const auto& [n, c] : series.coefficients) acc += std::norm(c);
    return (duty - acc) / duty;
}

} // namespace swdl
