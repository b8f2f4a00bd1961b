#include "swdl/components.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace swdl {

namespace {

constexpr double kPi = std::numbers::pi;

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

void fft_inplace(std::vector<std::complex<double>>& a, bool inverse) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = (inverse ? 2.0 : -2.0) * kPi / static_cast<double>(len);
        const std::complex<double> wlen = std::polar(1.0, ang);
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w{1.0, 0.0};
            for (std::size_t k = 0; k < len / 2; ++k) {
                const std::complex<double> u = a[i + k];
                const std::complex<double> v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
    if (inverse) {
        const double inv = 1.0 / static_cast<double>(n);
        for (auto& x : a) x *= inv;
    }
}

// Raised-cosine skirt: 1 inside [lo, hi], rolls to 0 over width w outside.
double skirt(double f, double lo, double hi, double w) {
    if (f >= lo && f <= hi) return 1.0;
    if (w <= 0.0) return 0.0;
    if (f > hi && f < hi + w) return 0.5 * (1.0 + std::cos(kPi * (f - hi) / w));
    if (f < lo && f > lo - w) return 0.5 * (1.0 + std::cos(kPi * (lo - f) / w));
    return 0.0;
}

TwoPortS interpolate_sampled(const DelayLineModel& dl, double f_hz) {
    const auto& pts = dl.sampled_response;
    auto it = std::lower_bound(pts.begin(), pts.end(), f_hz,
                               [](const SampledPoint& p, double f) { return p.f_hz < f; });
    if (it == pts.begin()) return it->s;
    if (it == pts.end()) return pts.back().s;
    const auto& hi = *it;
    const auto& lo = *(it - 1);
    const double t = (f_hz - lo.f_hz) / (hi.f_hz - lo.f_hz);
    auto lerp = [t](std::complex<double> a, std::complex<double> b) { return a + t * (b - a); };
    return {lerp(lo.s.s11, hi.s.s11), lerp(lo.s.s12, hi.s.s12), lerp(lo.s.s21, hi.s.s21),
            lerp(lo.s.s22, hi.s.s22)};
}

TwoPortS scale(const TwoPortS& s, double g) {
    return {s.s11 * g, s.s12 * g, s.s21 * g, s.s22 * g};
}

} // namespace

void SwitchModel::validate() const {
    if (!(r_on_ohm > 0.0) || !(r_on_ohm < r_off_ohm))
        throw std::invalid_argument("SwitchModel: requires 0 < r_on < r_off");
    if (!(t_switch_s >= 0.0))
        throw std::invalid_argument("SwitchModel: t_switch must be >= 0");
    if (ramp == SwitchRamp::Instant && t_switch_s != 0.0)
        throw std::invalid_argument("SwitchModel: Instant ramp requires t_switch = 0");
}

double switch_impedance(const SwitchModel& sw, SwitchPhase phase, double tau_s) {
    sw.validate();
    switch (phase) {
        case SwitchPhase::On: return sw.r_on_ohm;
        case SwitchPhase::Off: return sw.r_off_ohm;
        default: break;
    }
    if (!(tau_s >= 0.0 && tau_s <= sw.t_switch_s))
        throw std::invalid_argument("switch_impedance: tau outside [0, t_switch]");
    if (sw.t_switch_s == 0.0)
        return phase == SwitchPhase::TurningOn ? sw.r_on_ohm : sw.r_off_ohm;
    const double x = tau_s / sw.t_switch_s;
    if (phase == SwitchPhase::TurningOn)
        return sw.r_off_ohm + (sw.r_on_ohm - sw.r_off_ohm) * x;
    return sw.r_on_ohm + (sw.r_off_ohm - sw.r_on_ohm) * x;
}

TwoPortS identity_two_port() { return {0.0, 1.0, 1.0, 0.0}; }

TwoPortS flip(const TwoPortS& s) { return {s.s22, s.s21, s.s12, s.s11}; }

TwoPortS cascade(const TwoPortS& a, const TwoPortS& b) {
    const std::complex<double> d = 1.0 - a.s22 * b.s11;
    if (std::abs(d) < 1e-12)
        throw std::runtime_error("cascade: non-convergent junction (1 - s22a*s11b ~ 0)");
    TwoPortS out;
    out.s11 = a.s11 + a.s12 * b.s11 * a.s21 / d;
    out.s21 = b.s21 * a.s21 / d;
    out.s12 = a.s12 * b.s12 / d;
    out.s22 = b.s22 + b.s21 * a.s22 * b.s12 / d;
    return out;
}

double max_singular_value(const TwoPortS& s) {
    // Largest eigenvalue of S^H S for the 2x2 case.
    const double a = std::norm(s.s11) + std::norm(s.s21);
    const double d = std::norm(s.s12) + std::norm(s.s22);
    const std::complex<double> b = std::conj(s.s11) * s.s12 + std::conj(s.s21) * s.s22;
    const double tr = a + d;
    const double det = a * d - std::norm(b);
    const double disc = std::max(0.0, tr * tr / 4.0 - det);
    return std::sqrt(std::max(0.0, tr / 2.0 + std::sqrt(disc)));
}

void DelayLineModel::validate() const {
    if (!(group_delay_s >= 0.0))
        throw std::invalid_argument("DelayLineModel: group_delay must be >= 0");
    if (variant == DelayLineVariant::Sampled) {
        if (sampled_response.size() < 2)
            throw std::invalid_argument("DelayLineModel: sampled response needs >= 2 points");
        for (std::size_t i = 0; i < sampled_response.size(); ++i) {
            if (i > 0 && !(sampled_response[i].f_hz > sampled_response[i - 1].f_hz))
                throw std::invalid_argument("DelayLineModel: sampled frequencies must ascend");
            if (max_singular_value(sampled_response[i].s) > 1.0 + 1e-9)
                throw std::invalid_argument("DelayLineModel: sampled response is not passive");
        }
        return;
    }
    if (!(passband_il_db >= 0.0))
        throw std::invalid_argument("DelayLineModel: passband_il must be >= 0");
    if (variant == DelayLineVariant::IdealLowPass && f_l_hz != 0.0)
        throw std::invalid_argument("DelayLineModel: low-pass requires f_l = 0");
    if (!(f_l_hz >= 0.0) || !(f_u_hz > f_l_hz))
        throw std::invalid_argument("DelayLineModel: requires 0 <= f_l < f_u");
}

TwoPortS frequency_response(const DelayLineModel& dl, double f_hz) {
    dl.validate();
    if (!(f_hz >= 0.0)) throw std::invalid_argument("frequency_response: f must be >= 0");
    if (dl.variant == DelayLineVariant::Sampled) {
        if (f_hz < dl.sampled_response.front().f_hz || f_hz > dl.sampled_response.back().f_hz)
            throw std::out_of_range("frequency_response: query outside sampled table range");
        return interpolate_sampled(dl, f_hz);
    }
    TwoPortS out{0.0, 0.0, 0.0, 0.0};
    if (f_hz > dl.f_l_hz && f_hz < dl.f_u_hz) {
        const double gain = std::pow(10.0, -dl.passband_il_db / 20.0);
        const std::complex<double> t =
            std::polar(gain, -2.0 * kPi * f_hz * dl.group_delay_s);
        out.s12 = out.s21 = t;
    }
    return out;
}

void MatchingNetwork::validate() const {
    if (!(l_h > 0.0) || !(c_f > 0.0))
        throw std::invalid_argument("MatchingNetwork: L and C must be positive");
}

TwoPortS match_two_port(const MatchingNetwork& mn, double f_hz, double z0_ohm) {
    mn.validate();
    if (!(f_hz >= 0.0)) throw std::invalid_argument("match_two_port: f must be >= 0");
    if (!(z0_ohm > 0.0)) throw std::invalid_argument("match_two_port: z0 must be positive");
    using namespace std::complex_literals;
    const double w = 2.0 * kPi * f_hz;
    // ABCD of series L followed by shunt C (toward the device).
    const std::complex<double> a = 1.0 - w * w * mn.l_h * mn.c_f;
    const std::complex<double> b = 1i * w * mn.l_h;
    const std::complex<double> c = 1i * w * mn.c_f;
    const std::complex<double> d = 1.0;
    const std::complex<double> den = a + b / z0_ohm + c * z0_ohm + d;
    if (std::abs(den) < 1e-12)
        throw std::runtime_error("match_two_port: degenerate network");
    TwoPortS s;
    s.s11 = (a + b / z0_ohm - c * z0_ohm - d) / den;
    s.s12 = 2.0 * (a * d - b * c) / den;
    s.s21 = 2.0 / den;
    s.s22 = (-a + b / z0_ohm - c * z0_ohm + d) / den;
    return s;
}

double default_taper_hz(const DelayLineModel& dl) {
    double band = 0.0;
    if (dl.variant == DelayLineVariant::Sampled)
        band = dl.sampled_response.back().f_hz - dl.sampled_response.front().f_hz;
    else
        band = dl.f_u_hz - dl.f_l_hz;
    double w = 0.02 * band;
    if (dl.group_delay_s > 0.0) w = std::max(w, 1.25 / dl.group_delay_s);
    return w;
}

bool is_transparent(const DelayLineModel& dl, double sample_rate_hz) {
    return dl.variant != DelayLineVariant::Sampled && dl.f_u_hz >= 0.5 * sample_rate_hz;
}

TwoPortS kernel_response(const DelayLineModel& dl, double f_hz, double taper_hz) {
    if (dl.variant == DelayLineVariant::Sampled) {
        const double flo = dl.sampled_response.front().f_hz;
        const double fhi = dl.sampled_response.back().f_hz;
        if (f_hz < flo || f_hz > fhi) return {0.0, 0.0, 0.0, 0.0};
        // Out-of-table response is unknown; roll to zero inside the table
        // edges rather than extrapolate.
        const double g = skirt(f_hz, flo + taper_hz, fhi - taper_hz, taper_hz);
        return scale(interpolate_sampled(dl, f_hz), g);
    }
    // Ideal variants keep the full nominal band flat; the skirt extends
    // outward so in-band behavior matches frequency_response exactly.
    const double g = skirt(f_hz, dl.f_l_hz, dl.f_u_hz, taper_hz) *
                     std::pow(10.0, -dl.passband_il_db / 20.0);
    if (g <= 0.0 || f_hz < 0.0) return {0.0, 0.0, 0.0, 0.0};
    TwoPortS out{0.0, 0.0, 0.0, 0.0};
    out.s12 = out.s21 = std::polar(g, -2.0 * kPi * f_hz * dl.group_delay_s);
    return out;
}

bool LineKernel::has_reflection() const {
    auto nonzero = [](const std::vector<double>& v) {
        for (double x : v)
            if (x != 0.0) return true;
        return false;
    };
    return nonzero(h11) || nonzero(h22);
}

namespace {

LineKernel kernel_from_response(const std::function<TwoPortS(double)>& response,
                                double sample_rate_hz, int n_taps) {
    const std::size_t n_fft = next_pow2(std::max<std::size_t>(4 * static_cast<std::size_t>(n_taps), 1024));
    const std::size_t half = n_fft / 2;

    std::array<std::vector<std::complex<double>>, 4> spectra;
    for (auto& s : spectra) s.assign(n_fft, {0.0, 0.0});

    for (std::size_t k = 0; k <= half; ++k) {
        const double f = static_cast<double>(k) * sample_rate_hz / static_cast<double>(n_fft);
        TwoPortS s = response(f);
        if (k == 0 || k == half) {
            s.s11 = s.s11.real();
            s.s12 = s.s12.real();
            s.s21 = s.s21.real();
            s.s22 = s.s22.real();
        }
        spectra[0][k] = s.s11;
        spectra[1][k] = s.s21;
        spectra[2][k] = s.s12;
        spectra[3][k] = s.s22;
        if (k > 0 && k < half) {
            spectra[0][n_fft - k] = std::conj(s.s11);
            spectra[1][n_fft - k] = std::conj(s.s21);
            spectra[2][n_fft - k] = std::conj(s.s12);
            spectra[3][n_fft - k] = std::conj(s.s22);
        }
    }

    LineKernel kern;
    kern.sample_rate_hz = sample_rate_hz;
    std::array<std::vector<double>*, 4> out = {&kern.h11, &kern.h21, &kern.h12, &kern.h22};
    double total_energy = 0.0;
    double kept_energy = 0.0;
    for (int e = 0; e < 4; ++e) {
        bool all_zero = true;
        for (const auto& c : spectra[e])
            if (c != std::complex<double>{0.0, 0.0}) {
                all_zero = false;
                break;
            }
        out[e]->assign(n_taps, 0.0);
        if (all_zero) continue;
        fft_inplace(spectra[e], true);
        for (std::size_t i = 0; i < n_fft; ++i) {
            const double v = spectra[e][i].real();
            total_energy += v * v;
            if (i < static_cast<std::size_t>(n_taps)) {
                (*out[e])[i] = v;
                kept_energy += v * v;
            }
        }
    }
    if (total_energy > 0.0 && (total_energy - kept_energy) / total_energy > 1e-4)
        throw std::invalid_argument(
            "impulse_response: insufficient n_taps (energy truncation > 1e-4); "
            "increase n_taps or widen the taper");
    return kern;
}

} // namespace

LineKernel build_line_kernel(const DelayLineModel& dl,
                             const std::optional<MatchingNetwork>& match_left,
                             const std::optional<MatchingNetwork>& match_right,
                             double z0_ohm, double sample_rate_hz, int n_taps,
                             double taper_hz) {
    dl.validate();
    if (!(sample_rate_hz > 0.0))
        throw std::invalid_argument("impulse_response: sample_rate must be positive");
    if (n_taps < 16) throw std::invalid_argument("impulse_response: n_taps too small");

    const bool transparent = is_transparent(dl, sample_rate_hz);
    if (transparent && !match_left && !match_right) {
        const double d = dl.group_delay_s * sample_rate_hz;
        const auto idx = static_cast<long>(std::llround(d));
        if (std::abs(d - static_cast<double>(idx)) > 1e-6)
            throw std::invalid_argument(
                "impulse_response: transparent line requires group_delay on the sample grid");
        if (idx >= n_taps)
            throw std::invalid_argument("impulse_response: n_taps shorter than the line delay");
        LineKernel kern;
        kern.sample_rate_hz = sample_rate_hz;
        kern.h11.assign(n_taps, 0.0);
        kern.h22.assign(n_taps, 0.0);
        kern.h21.assign(n_taps, 0.0);
        kern.h12.assign(n_taps, 0.0);
        kern.h21[idx] = kern.h12[idx] = std::pow(10.0, -dl.passband_il_db / 20.0);
        return kern;
    }

    if (!transparent) {
        const double f_top = dl.variant == DelayLineVariant::Sampled
                                 ? dl.sampled_response.back().f_hz
                                 : dl.f_u_hz;
        if (!(sample_rate_hz > 4.0 * f_top))
            throw std::invalid_argument("impulse_response: sample_rate must exceed 4*f_u");
        if (dl.group_delay_s > 0.0 &&
            static_cast<double>(n_taps) / sample_rate_hz < 4.0 * dl.group_delay_s)
            throw std::invalid_argument("impulse_response: n_taps must cover 4*group_delay");
    }

    const double w = taper_hz > 0.0 ? taper_hz : default_taper_hz(dl);
    auto response = [&](double f) -> TwoPortS {
        TwoPortS s = kernel_response(dl, f, w);
        if (match_left) s = cascade(match_two_port(*match_left, f, z0_ohm), s);
        if (match_right) s = cascade(s, flip(match_two_port(*match_right, f, z0_ohm)));
        return s;
    };
    return kernel_from_response(response, sample_rate_hz, n_taps);
}

LineKernel impulse_response(const DelayLineModel& dl, double sample_rate_hz, int n_taps,
                            double taper_hz) {
    return build_line_kernel(dl, std::nullopt, std::nullopt, 50.0, sample_rate_hz, n_taps,
                             taper_hz);
}

} // namespace swdl
