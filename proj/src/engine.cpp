#include "swdl/engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstring>
#include <exception>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <thread>

namespace swdl {

namespace {

constexpr double kPi = std::numbers::pi;

using Mat4 = std::array<std::array<double, 4>, 4>;

Mat4 identity4() {
    Mat4 m{};
    for (int i = 0; i < 4; ++i) m[i][i] = 1.0;
    return m;
}

Mat4 inv4(Mat4 a) {
    Mat4 inv = identity4();
    for (int col = 0; col < 4; ++col) {
        int pivot = col;
        for (int r = col + 1; r < 4; ++r)
            if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
        if (std::abs(a[pivot][col]) < 1e-300)
            throw std::runtime_error("singular junction matrix");
        std::swap(a[col], a[pivot]);
        std::swap(inv[col], inv[pivot]);
        const double scale = 1.0 / a[col][col];
        for (int c = 0; c < 4; ++c) {
            a[col][c] *= scale;
            inv[col][c] *= scale;
        }
        for (int r = 0; r < 4; ++r) {
            if (r == col) continue;
            const double f = a[r][col];
            if (f == 0.0) continue;
            for (int c = 0; c < 4; ++c) {
                a[r][c] -= f * a[col][c];
                inv[r][c] -= f * inv[col][c];
            }
        }
    }
    return inv;
}

Mat4 mul4(const Mat4& a, const Mat4& b) {
    Mat4 m{};
    for (int i = 0; i < 4; ++i)
        for (int k = 0; k < 4; ++k) {
            const double v = a[i][k];
            if (v == 0.0) continue;
            for (int j = 0; j < 4; ++j) m[i][j] += v * b[k][j];
        }
    return m;
}

struct Branch {
    int port_node;
    int line_node;
    int phase_index; // into control_phase_s (L1, R1, L2, R2)
};

// Left module: port nodes are {1, 3}; right module: {2, 4}.
constexpr std::array<Branch, 4> kLeftBranches = {
    Branch{0, 2, 0}, Branch{0, 3, 2}, Branch{1, 2, 2}, Branch{1, 3, 0}};
constexpr std::array<Branch, 4> kRightBranches = {
    Branch{0, 2, 1}, Branch{0, 3, 3}, Branch{1, 2, 3}, Branch{1, 3, 1}};

// Series resistance of a gate whose on-window starts at local time 0 and
// spans half the 4*delta period; the impedance ramps linearly over the
// switch time at both edges.
double gate_resistance(const SwitchModel& sw, double tau, double quarter_s) {
    const double period = 4.0 * quarter_s;
    const double half = 2.0 * quarter_s;
    const double ts = sw.t_switch_s;
    tau = std::fmod(tau, period);
    if (tau < 0.0) tau += period;
    if (tau < ts) return sw.r_off_ohm + (sw.r_on_ohm - sw.r_off_ohm) * (tau / ts);
    if (tau < half) return sw.r_on_ohm;
    if (tau < half + ts)
        return sw.r_on_ohm + (sw.r_off_ohm - sw.r_on_ohm) * ((tau - half) / ts);
    return sw.r_off_ohm;
}

Mat4 module_scatter(const std::array<double, 4>& r_series, const std::array<double, 4>& r_shunt,
                    const std::array<Branch, 4>& branches, bool shunts, double z0, double d_a,
                    double d_b) {
    Mat4 g{};
    for (int i = 0; i < 4; ++i) g[i][i] = 1.0 / z0;
    for (int k = 0; k < 4; ++k) {
        const int i = branches[k].port_node;
        const int j = branches[k].line_node;
        if (shunts) {
            // Series-shunt-series cell: two half-resistances around a mid
            // node with a complementary-gated shunt to ground. The mid
            // node is folded out (Schur complement of a diagonal block).
            const double gh = 2.0 / r_series[k];
            const double gmm = 2.0 * gh + 1.0 / r_shunt[k];
            const double f = gh * gh / gmm;
            g[i][i] += gh - f;
            g[j][j] += gh - f;
            g[i][j] -= f;
            g[j][i] -= f;
        } else {
            const double gb = 1.0 / r_series[k];
            g[i][i] += gb;
            g[j][j] += gb;
            g[i][j] -= gb;
            g[j][i] -= gb;
        }
    }
    const Mat4 w = inv4(g);
    Mat4 s{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) s[i][j] = (2.0 / z0) * w[i][j] - (i == j ? 1.0 : 0.0);
    if (d_a == 0.0 && d_b == 0.0) return s;
    // Fold the lines' instantaneous self-reflection taps so the incident
    // wave at a line node may depend on the wave emitted the same sample.
    Mat4 isd = identity4();
    for (int i = 0; i < 4; ++i) {
        isd[i][2] -= s[i][2] * d_a;
        isd[i][3] -= s[i][3] * d_b;
    }
    return mul4(inv4(isd), s);
}

} // namespace

CirculatorConfig finalize_config(const CirculatorConfig& cfg) {
    CirculatorConfig c = cfg;
    if (!(c.delta_s > 0.0)) throw std::invalid_argument("config: delta must be positive");
    if (!(c.z0_ohm > 0.0)) throw std::invalid_argument("config: z0 must be positive");
    if (c.f_mod_hz <= 0.0) c.f_mod_hz = 1.0 / (4.0 * c.delta_s);
    const double quarter = 1.0 / (4.0 * c.f_mod_hz);
    c.sw.validate();
    if (!(c.sw.t_switch_s < 2.0 * quarter))
        throw std::invalid_argument("config: switch time must be below half the gate period");
    for (int i = 0; i < 4; ++i)
        if (c.control_phase_s[i] < 0.0) c.control_phase_s[i] = static_cast<double>(i) * quarter;
    c.line_a.validate();
    if (!c.line_b_blocked) c.line_b.validate();
    if (c.n_discard_periods < 0 || c.n_analyze_periods < 1)
        throw std::invalid_argument("config: bad analysis window");

    double f_top = 0.0;
    auto line_top = [](const DelayLineModel& dl) {
        return dl.variant == DelayLineVariant::Sampled ? dl.sampled_response.back().f_hz
                                                       : dl.f_u_hz;
    };
    f_top = line_top(c.line_a);
    if (!c.line_b_blocked) f_top = std::max(f_top, line_top(c.line_b));

    if (c.sample_rate_hz <= 0.0) {
        if (f_top > 1e12)
            throw std::invalid_argument(
                "config: set sample_rate_hz explicitly for delay-only (transparent) lines");
        const auto n_per = static_cast<std::int64_t>(std::ceil(20.0 * f_top / c.f_mod_hz - 1e-9));
        c.sample_rate_hz = static_cast<double>(std::max<std::int64_t>(n_per, 64)) * c.f_mod_hz;
    }
    const double ratio = c.sample_rate_hz / c.f_mod_hz;
    if (std::abs(ratio - std::round(ratio)) > 1e-6 * ratio)
        throw std::invalid_argument("config: sample_rate must be an integer multiple of f_mod");
    c.sample_rate_hz = std::round(ratio) * c.f_mod_hz;

    auto check_rate = [&](const DelayLineModel& dl) {
        if (is_transparent(dl, c.sample_rate_hz)) return; // pure delay, no band edge to resolve
        if (c.sample_rate_hz < 20.0 * line_top(dl) * (1.0 - 1e-12))
            throw std::invalid_argument("config: sample_rate must be >= 20*f_u of each line");
    };
    check_rate(c.line_a);
    if (!c.line_b_blocked) check_rate(c.line_b);
    return c;
}

PreparedCirculator::LineState PreparedCirculator::trim_kernel(const LineKernel& k) {
    LineState st;
    auto trim = [](const std::vector<double>& h, bool cross) {
        Trimmed t;
        double peak = 0.0;
        for (double v : h) peak = std::max(peak, std::abs(v));
        if (peak == 0.0) return t;
        if (cross && std::abs(h[0]) > 1e-9 * peak)
            throw std::invalid_argument(
                "engine: line through-path must be delayed by at least one sample");
        const double eps = 1e-12 * peak;
        std::size_t first = h.size(), last = 0;
        for (std::size_t i = 1; i < h.size(); ++i) {
            if (std::abs(h[i]) > eps) {
                if (first == h.size()) first = i;
                last = i;
            }
        }
        if (first == h.size()) return t;
        t.tau_max = static_cast<std::int64_t>(last);
        t.grev.resize(last - first + 1);
        for (std::size_t i = 0; i < t.grev.size(); ++i) t.grev[i] = h[last - i];
        t.active = true;
        return t;
    };
    st.h11 = trim(k.h11, false);
    st.h22 = trim(k.h22, false);
    st.h21 = trim(k.h21, true);
    st.h12 = trim(k.h12, true);
    st.d11 = k.h11.empty() ? 0.0 : k.h11[0];
    st.d22 = k.h22.empty() ? 0.0 : k.h22[0];
    return st;
}

namespace {

int auto_taps(const DelayLineModel& dl, double fs, double taper_hz) {
    if (is_transparent(dl, fs)) {
        const double idx = dl.group_delay_s * fs;
        int n = 64;
        while (n < idx + 64) n <<= 1;
        return n;
    }
    const double w = taper_hz > 0.0 ? taper_hz : default_taper_hz(dl);
    const double ring = fs / w;
    const double need = std::max(4.0 * dl.group_delay_s * fs,
                                 dl.group_delay_s * fs + 4.0 * ring);
    int n = 1024;
    while (n < need) n <<= 1;
    return n;
}

} // namespace

PreparedCirculator::PreparedCirculator(const CirculatorConfig& cfg)
    : cfg_(finalize_config(cfg)) {
    const double fs = cfg_.sample_rate_hz;
    n_per_mod_ = std::llround(fs / cfg_.f_mod_hz);

    const int taps_a = cfg_.kernel_taps > 0 ? cfg_.kernel_taps
                                            : auto_taps(cfg_.line_a, fs, cfg_.taper_hz);
    line_a_ = trim_kernel(build_line_kernel(cfg_.line_a, cfg_.matching[0], cfg_.matching[1],
                                            cfg_.z0_ohm, fs, taps_a, cfg_.taper_hz));
    if (!cfg_.line_b_blocked) {
        const int taps_b = cfg_.kernel_taps > 0 ? cfg_.kernel_taps
                                                : auto_taps(cfg_.line_b, fs, cfg_.taper_hz);
        line_b_ = trim_kernel(build_line_kernel(cfg_.line_b, cfg_.matching[2], cfg_.matching[3],
                                                cfg_.z0_ohm, fs, taps_b, cfg_.taper_hz));
    }
    build_matrices();
}

void PreparedCirculator::build_matrices() {
    const double fs = cfg_.sample_rate_hz;
    const double quarter = 1.0 / (4.0 * cfg_.f_mod_hz);
    m_left_.resize(n_per_mod_);
    m_right_.resize(n_per_mod_);

    std::array<double, 4> prev_rse_l{}, prev_rsh_l{}, prev_rse_r{}, prev_rsh_r{};
    bool have_prev = false;
    for (std::int64_t s = 0; s < n_per_mod_; ++s) {
        const double t = static_cast<double>(s) / fs;
        std::array<double, 4> rse_l{}, rsh_l{}, rse_r{}, rsh_r{};
        for (int k = 0; k < 4; ++k) {
            const double ph_l = cfg_.control_phase_s[kLeftBranches[k].phase_index];
            const double ph_r = cfg_.control_phase_s[kRightBranches[k].phase_index];
            if (cfg_.all_switches_on) {
                rse_l[k] = rse_r[k] = cfg_.sw.r_on_ohm;
                rsh_l[k] = rsh_r[k] = cfg_.sw.r_off_ohm;
            } else {
                rse_l[k] = gate_resistance(cfg_.sw, t - ph_l, quarter);
                rsh_l[k] = gate_resistance(cfg_.sw, t - ph_l - 2.0 * quarter, quarter);
                rse_r[k] = gate_resistance(cfg_.sw, t - ph_r, quarter);
                rsh_r[k] = gate_resistance(cfg_.sw, t - ph_r - 2.0 * quarter, quarter);
            }
        }
        if (have_prev && rse_l == prev_rse_l && rsh_l == prev_rsh_l && rse_r == prev_rse_r &&
            rsh_r == prev_rsh_r) {
            m_left_[s] = m_left_[s - 1];
            m_right_[s] = m_right_[s - 1];
            continue;
        }
        m_left_[s] = module_scatter(rse_l, rsh_l, kLeftBranches, cfg_.shunt_switches, cfg_.z0_ohm,
                                    line_a_.d11, line_b_.d11);
        m_right_[s] = module_scatter(rse_r, rsh_r, kRightBranches, cfg_.shunt_switches,
                                     cfg_.z0_ohm, line_a_.d22, line_b_.d22);
        prev_rse_l = rse_l;
        prev_rsh_l = rsh_l;
        prev_rse_r = rse_r;
        prev_rsh_r = rsh_r;
        have_prev = true;
    }
}

namespace {

// Dot product of a trimmed, reversed kernel with the input history ending
// at sample t (tap 0 excluded; instantaneous taps are folded into the
// junction matrices).
inline double kernel_dot(const std::vector<double>& grev, std::int64_t tau_max,
                         const std::vector<double>& in, std::int64_t t) {
    const std::int64_t base = t - tau_max;
    std::int64_t i0 = base < 0 ? -base : 0;
    const auto len = static_cast<std::int64_t>(grev.size());
    if (i0 >= len) return 0.0;
    const double* g = grev.data() + i0;
    const double* x = in.data() + base + i0;
    const std::int64_t n = len - i0;
    double acc = 0.0;
    for (std::int64_t i = 0; i < n; ++i) acc += g[i] * x[i];
    return acc;
}

} // namespace

SimulationResult PreparedCirculator::simulate_tone(int source_port, double f_s_hz,
                                                   double amplitude_sqrt_w,
                                                   int n_analyze_periods) const {
    if (source_port < 1 || source_port > 4)
        throw std::invalid_argument("simulate_tone: source_port must be 1..4");
    if (!(amplitude_sqrt_w > 0.0) || !std::isfinite(amplitude_sqrt_w))
        throw std::invalid_argument("simulate_tone: amplitude must be positive");
    const int n_analyze = n_analyze_periods > 0 ? n_analyze_periods : cfg_.n_analyze_periods;
    const int n_discard = cfg_.n_discard_periods;
    if (n_discard + n_analyze < 20)
        throw std::invalid_argument("simulate_tone: needs at least 20 modulation periods");
    const double fs = cfg_.sample_rate_hz;
    if (!(f_s_hz > 0.0) || f_s_hz >= 0.5 * fs)
        throw std::invalid_argument("simulate_tone: carrier must lie below Nyquist");
    const double cycles = f_s_hz * static_cast<double>(n_analyze) / cfg_.f_mod_hz;
    if (std::abs(cycles - std::round(cycles)) > 1e-6 * std::max(1.0, cycles))
        throw std::invalid_argument(
            "simulate_tone: carrier is not commensurate with the analysis window");

    const std::int64_t n_total = static_cast<std::int64_t>(n_discard + n_analyze) * n_per_mod_;

    SimulationResult res;
    res.sample_rate_hz = fs;
    res.f_mod_hz = cfg_.f_mod_hz;
    res.f_s_hz = f_s_hz;
    res.amplitude_sqrt_w = amplitude_sqrt_w;
    res.source_port = source_port;
    res.steady_start = static_cast<std::int64_t>(n_discard) * n_per_mod_;
    res.n_analyze = static_cast<std::int64_t>(n_analyze) * n_per_mod_;
    for (auto& v : res.a) v.assign(n_total, 0.0);
    for (auto& v : res.b) v.assign(n_total, 0.0);
    res.line_in_a_left.assign(n_total, 0.0);
    res.line_in_a_right.assign(n_total, 0.0);
    res.line_in_b_left.assign(n_total, 0.0);
    res.line_in_b_right.assign(n_total, 0.0);

    {
        auto& src = res.a[source_port - 1];
        const double w = 2.0 * kPi * f_s_hz / fs;
        for (std::int64_t t = 0; t < n_total; ++t)
            src[t] = amplitude_sqrt_w * std::cos(w * static_cast<double>(t));
    }

    auto emit = [](const Trimmed& k, const std::vector<double>& in, std::int64_t t) {
        return k.active ? kernel_dot(k.grev, k.tau_max, in, t) : 0.0;
    };

    auto& inAl = res.line_in_a_left;
    auto& inAr = res.line_in_a_right;
    auto& inBl = res.line_in_b_left;
    auto& inBr = res.line_in_b_right;

    for (std::int64_t t = 0; t < n_total; ++t) {
        const std::int64_t s = t % n_per_mod_;
        // Waves emerging from the lines toward each module.
        const double eAl = emit(line_a_.h11, inAl, t) + emit(line_a_.h12, inAr, t);
        const double eAr = emit(line_a_.h21, inAl, t) + emit(line_a_.h22, inAr, t);
        const double eBl = emit(line_b_.h11, inBl, t) + emit(line_b_.h12, inBr, t);
        const double eBr = emit(line_b_.h21, inBl, t) + emit(line_b_.h22, inBr, t);

        const std::array<double, 4> aL = {res.a[0][t], res.a[2][t], eAl, eBl};
        const std::array<double, 4> aR = {res.a[1][t], res.a[3][t], eAr, eBr};

        const Mat4& ml = m_left_[s];
        const Mat4& mr = m_right_[s];
        std::array<double, 4> bL{}, bR{};
        for (int i = 0; i < 4; ++i) {
            bL[i] = ml[i][0] * aL[0] + ml[i][1] * aL[1] + ml[i][2] * aL[2] + ml[i][3] * aL[3];
            bR[i] = mr[i][0] * aR[0] + mr[i][1] * aR[1] + mr[i][2] * aR[2] + mr[i][3] * aR[3];
        }
        res.b[0][t] = bL[0];
        res.b[2][t] = bL[1];
        res.b[1][t] = bR[0];
        res.b[3][t] = bR[1];
        inAl[t] = bL[2];
        inBl[t] = bL[3];
        inAr[t] = bR[2];
        inBr[t] = bR[3];
    }

    // Steady-state guard: output energy must not grow across the analysis
    // window (the network is passive; growth indicates a broken kernel).
    const std::int64_t half = res.n_analyze / 2;
    double e1 = 0.0, e2 = 0.0;
    for (int p = 0; p < 4; ++p) {
        for (std::int64_t i = 0; i < half; ++i) {
            const double v = res.b[p][res.steady_start + i];
            e1 += v * v;
        }
        for (std::int64_t i = half; i < res.n_analyze; ++i) {
            const double v = res.b[p][res.steady_start + i];
            e2 += v * v;
        }
    }
    if (e1 > 0.0 && 10.0 * std::log10(e2 / e1) > 0.1)
        throw std::runtime_error("simulate_tone: unstable energy growth (" +
                                 std::to_string(10.0 * std::log10(e2 / e1)) +
                                 " dB across the analysis window)");
    return res;
}

double PreparedCirculator::snap_frequency(double f_hz, int n_analyze_periods) const {
    const int n_analyze = n_analyze_periods > 0 ? n_analyze_periods : cfg_.n_analyze_periods;
    const double df = cfg_.f_mod_hz / static_cast<double>(n_analyze);
    return std::max(1.0, std::round(f_hz / df)) * df;
}

std::complex<double> SimulationResult::tone_amplitude(const std::vector<double>& series,
                                                      double f_hz) const {
    const double n = static_cast<double>(n_analyze);
    const double k = f_hz / sample_rate_hz * n;
    if (std::abs(k - std::round(k)) > 1e-6 * std::max(1.0, k))
        throw std::invalid_argument("tone_amplitude: frequency is not on the analysis grid");
    const double ang = -2.0 * kPi * std::round(k) / n;
    const std::complex<double> step = std::polar(1.0, ang);
    std::complex<double> rot{1.0, 0.0};
    std::complex<double> acc{0.0, 0.0};
    for (std::int64_t i = 0; i < n_analyze; ++i) {
        acc += series[steady_start + i] * rot;
        rot *= step;
    }
    return 2.0 * acc / n;
}

SimulationResult simulate_tone(const CirculatorConfig& cfg, int source_port, double f_s_hz,
                               double amplitude_sqrt_w, int n_analyze_periods) {
    return PreparedCirculator(cfg).simulate_tone(source_port, f_s_hz, amplitude_sqrt_w,
                                                 n_analyze_periods);
}

std::vector<SparamPoint> extract_sparams(const CirculatorConfig& cfg,
                                         const std::vector<double>& f_grid_hz, double power_dbm,
                                         const std::vector<int>& source_ports, int jobs) {
    if (f_grid_hz.empty()) throw std::invalid_argument("extract_sparams: empty grid");
    if (source_ports.empty()) throw std::invalid_argument("extract_sparams: no source ports");
    const PreparedCirculator prep(cfg);
    const double amp = dbm_to_amplitude(power_dbm);

    std::vector<SparamPoint> out(f_grid_hz.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i].f_hz = f_grid_hz[i];

    const std::size_t n_tasks = f_grid_hz.size() * source_ports.size();
    parallel_for(n_tasks, jobs, [&](std::size_t task) {
        const std::size_t fi = task / source_ports.size();
        const int src = source_ports[task % source_ports.size()];
        const SimulationResult r = prep.simulate_tone(src, f_grid_hz[fi], amp);
        const std::complex<double> denom = r.tone_amplitude(r.a[src - 1], r.f_s_hz);
        for (int row = 0; row < 4; ++row) {
            const std::complex<double> num = r.tone_amplitude(r.b[row], r.f_s_hz);
            out[fi].s[row][src - 1] = num / denom;
        }
    });
    return out;
}

ToneSpectrum extract_spectrum(const CirculatorConfig& cfg, int source_port, double f_s_hz,
                              int observe_port, double power_dbm, int n_harmonics) {
    if (observe_port < 1 || observe_port > 4)
        throw std::invalid_argument("extract_spectrum: observe_port must be 1..4");
    const PreparedCirculator prep(cfg);
    const SimulationResult r =
        prep.simulate_tone(source_port, f_s_hz, dbm_to_amplitude(power_dbm));

    auto power_of = [&](double f) {
        const std::complex<double> amp = r.tone_amplitude(r.b[observe_port - 1], f);
        const double mw = 500.0 * std::norm(amp);
        return mw > 0.0 ? std::max(-kSaturatedDb, 10.0 * std::log10(mw)) : -kSaturatedDb;
    };

    ToneSpectrum spec;
    spec.observe_port = observe_port;
    spec.carrier_power_dbm = power_of(f_s_hz);
    for (int n = -n_harmonics; n <= n_harmonics; ++n) {
        const double f = f_s_hz + static_cast<double>(n) * cfg.f_mod_hz;
        if (!(f > 0.0) || f >= 0.5 * r.sample_rate_hz) continue;
        Tone tone;
        tone.f_hz = f;
        tone.n = n;
        tone.power_dbm = power_of(f);
        tone.dbc = tone.power_dbm - spec.carrier_power_dbm;
        spec.tones.push_back(tone);
    }
    return spec;
}

GroupDelayResult group_delay(const std::vector<double>& f_grid_hz,
                             const std::vector<std::complex<double>>& s_values) {
    const std::size_t n = f_grid_hz.size();
    if (n < 3 || s_values.size() != n)
        throw std::invalid_argument("group_delay: needs >= 3 matching grid points");
    for (std::size_t i = 1; i < n; ++i)
        if (!(f_grid_hz[i] > f_grid_hz[i - 1]))
            throw std::invalid_argument("group_delay: grid must ascend");

    GroupDelayResult out;
    std::vector<double> phase(n);
    phase[0] = std::arg(s_values[0]);
    for (std::size_t i = 1; i < n; ++i) {
        double d = std::arg(s_values[i]) - phase[i - 1];
        d -= 2.0 * kPi * std::round(d / (2.0 * kPi));
        if (std::abs(d) > 0.9 * kPi) out.unambiguous = false;
        phase[i] = phase[i - 1] + d;
    }
    out.delay_s.resize(n);
    auto slope = [&](std::size_t i, std::size_t j) {
        return -(phase[j] - phase[i]) / (2.0 * kPi * (f_grid_hz[j] - f_grid_hz[i]));
    };
    out.delay_s[0] = slope(0, 1);
    for (std::size_t i = 1; i + 1 < n; ++i) out.delay_s[i] = slope(i - 1, i + 1);
    out.delay_s[n - 1] = slope(n - 2, n - 1);
    return out;
}

void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn) {
    if (jobs <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&]() {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                return;
            }
        }
    };
    const int n_threads = std::min<std::size_t>(jobs, n);
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

double dbm_to_amplitude(double power_dbm) {
    return std::sqrt(2.0 * std::pow(10.0, (power_dbm - 30.0) / 10.0));
}

double db20(std::complex<double> x) {
    const double m = std::abs(x);
    if (m <= 0.0) return -kSaturatedDb;
    return std::clamp(20.0 * std::log10(m), -kSaturatedDb, kSaturatedDb);
}

} // namespace swdl
