#include "swdl/analytic.hpp"

#include "swdl/signals.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace swdl {

namespace {

double sinc(double x) {
    if (x == 0.0) return 1.0;
    const double px = std::numbers::pi * x;
    return std::sin(px) / px;
}

// Power 2|a_n|^2 of tone n of the 50% duty gate.
double tone_power(int n) {
    const double delta = 1.0; // |a_n| does not depend on delta
    const std::complex<double> a = fourier_coefficient(FourierKind::A, n, delta, 0.0, 0.0);
    return 2.0 * std::norm(a);
}

// Smallest/largest integer strictly inside the open interval (lo, hi).
bool integer_range(double lo, double hi, long& first, long& last) {
    first = static_cast<long>(std::floor(lo)) + 1;
    last = static_cast<long>(std::ceil(hi)) - 1;
    if (static_cast<double>(first) <= lo) ++first;
    if (static_cast<double>(last) >= hi) --last;
    return first <= last;
}

double tone_sum(const TonePlan& plan, const PassbandSpec& band) {
    plan.validate();
    band.validate();

    const int n_range = plan.harmonic_range;
    double sum = 0.0;
    for (int n = -n_range; n <= n_range; ++n) {
        if (band.contains(plan.f_s_hz + static_cast<double>(n) * plan.f_m_hz))
            sum += tone_power(n);
    }

    // Tones beyond |n| <= harmonic_range that would land in a finite band
    // must be negligible. An unbounded (low-pass, f_u = inf) band accepts
    // the whole tail, where the truncation residual is the Parseval tail
    // and shrinks as 1/harmonic_range.
    if (!std::isinf(band.f_u_hz)) {
        const double bound_coef = 2.0 / (std::numbers::pi * std::numbers::pi);
        double dropped = 0.0;
        const std::array<std::pair<double, double>, 2> intervals = {
            std::make_pair(band.f_l_hz, band.f_u_hz),
            std::make_pair(-band.f_u_hz, -band.f_l_hz)};
        for (const auto& [lo, hi] : intervals) {
            long first = 0, last = 0;
            if (!integer_range((lo - plan.f_s_hz) / plan.f_m_hz,
                               (hi - plan.f_s_hz) / plan.f_m_hz, first, last))
                continue;
            // Portions of [first, last] outside [-n_range, n_range].
            if (first < -n_range) {
                const long m0 = std::max<long>(n_range + 1, -last);
                dropped += bound_coef / static_cast<double>(std::max<long>(1, m0 - 1));
            }
            if (last > n_range) {
                const long m0 = std::max<long>(n_range + 1, first);
                dropped += bound_coef / static_cast<double>(std::max<long>(1, m0 - 1));
            }
        }
        if (dropped > 1e-6)
            throw std::invalid_argument(
                "il_filtering: harmonic_range too small, dropped in-band tone power exceeds 1e-6");
    }
    return sum;
}

} // namespace

void TonePlan::validate() const {
    if (!(f_s_hz > 0.0)) throw std::invalid_argument("TonePlan: f_s must be positive");
    if (!(f_m_hz > 0.0)) throw std::invalid_argument("TonePlan: f_m must be positive");
    if (harmonic_range < 1) throw std::invalid_argument("TonePlan: harmonic_range must be >= 1");
}

void PassbandSpec::validate() const {
    if (!(f_l_hz >= 0.0) || !(f_l_hz < f_u_hz))
        throw std::invalid_argument("PassbandSpec: requires 0 <= f_l < f_u");
    if (shape == PassbandShape::LowPass && f_l_hz != 0.0)
        throw std::invalid_argument("PassbandSpec: low-pass requires f_l = 0");
}

bool PassbandSpec::contains(double f_hz) const {
    return (f_hz > f_l_hz && f_hz < f_u_hz) || (f_hz > -f_u_hz && f_hz < -f_l_hz);
}

double il_filtering(const TonePlan& plan, const PassbandSpec& band) {
    const double sum = tone_sum(plan, band);
    if (sum <= 0.0) return kSaturatedDb;
    return std::min(kSaturatedDb, -10.0 * std::log10(sum));
}

double il_filtering_amplitude_db(const TonePlan& plan, const PassbandSpec& band) {
    const double sum = tone_sum(plan, band);
    if (sum <= 0.0) return kSaturatedDb;
    return std::min(kSaturatedDb, -20.0 * std::log10(sum));
}

std::vector<IlCurvePoint> il_curve(const TonePlan& plan, PassbandShape shape,
                                   const std::vector<double>& normalized_bw_grid,
                                   double carrier_position) {
    plan.validate();
    if (normalized_bw_grid.empty()) throw std::invalid_argument("il_curve: empty grid");
    for (std::size_t i = 1; i < normalized_bw_grid.size(); ++i)
        if (normalized_bw_grid[i] <= normalized_bw_grid[i - 1])
            throw std::invalid_argument("il_curve: grid must be strictly ascending");
    if (!(carrier_position >= 0.0 && carrier_position <= 1.0))
        throw std::invalid_argument("il_curve: carrier_position must be in [0, 1]");

    std::vector<IlCurvePoint> out;
    out.reserve(normalized_bw_grid.size());
    for (const double w : normalized_bw_grid) {
        if (!(w > 0.0)) {
            out.push_back({w, kSaturatedDb}); // degenerate zero-width band
            continue;
        }
        const double bw = w * plan.f_m_hz;
        PassbandSpec band;
        TonePlan p = plan;
        if (shape == PassbandShape::BandPass) {
            band.shape = PassbandShape::BandPass;
            band.f_l_hz = plan.f_s_hz - 0.5 * bw; // band centered on plan.f_s
            band.f_u_hz = plan.f_s_hz + 0.5 * bw;
            p.f_s_hz = plan.f_s_hz + (carrier_position - 0.5) * bw;
            if (!(band.f_l_hz > 0.0))
                throw std::invalid_argument("il_curve: band extends below DC; raise plan.f_s");
        } else {
            band.shape = PassbandShape::LowPass;
            band.f_l_hz = 0.0;
            band.f_u_hz = bw;
            p.f_s_hz = carrier_position * bw;
        }
        if (!(p.f_s_hz > 0.0))
            throw std::invalid_argument("il_curve: carrier_position places the carrier at or below DC");
        out.push_back({w, il_filtering(p, band)});
    }
    return out;
}

double deviation_il(double dd_ratio) {
    if (!(dd_ratio >= 0.0 && dd_ratio < 1.0))
        throw std::invalid_argument("deviation_il: dd_ratio must be in [0, 1)");
    return -20.0 * std::log10(1.0 - dd_ratio);
}

double deviation_isolation(double dd_ratio) {
    if (!(dd_ratio >= 0.0 && dd_ratio < 1.0))
        throw std::invalid_argument("deviation_isolation: dd_ratio must be in [0, 1)");
    if (dd_ratio == 0.0) return kSaturatedDb;
    return std::min(kSaturatedDb, -20.0 * std::log10(dd_ratio));
}

double modulated_tone_level(PortRole port, int n, double dd_ratio) {
    if (n == 0) throw std::invalid_argument("modulated_tone_level: n must be nonzero");
    if (port == PortRole::Through) {
        if (!(dd_ratio >= 0.0 && dd_ratio < 1.0))
            throw std::invalid_argument("modulated_tone_level: dd_ratio must be in [0, 1)");
        const double s = std::abs(sinc(static_cast<double>(n) * (1.0 - dd_ratio)));
        return s == 0.0 ? -kSaturatedDb : std::max(-kSaturatedDb, 20.0 * std::log10(s));
    }
    if (!(dd_ratio > 0.0 && dd_ratio < 1.0))
        throw std::invalid_argument(
            "modulated_tone_level: isolated port requires dd_ratio in (0, 1)");
    const double s = std::abs(sinc(static_cast<double>(n) * dd_ratio));
    return s == 0.0 ? -kSaturatedDb : std::max(-kSaturatedDb, 20.0 * std::log10(s));
}

SwitchTimeEffects switch_time_effects(double ts_ratio, int n_max) {
    if (!(ts_ratio >= 0.0 && ts_ratio < 1.0))
        throw std::invalid_argument("switch_time_effects: ts_ratio must be in [0, 1)");
    SwitchTimeEffects eff;
    eff.il_db = -20.0 * std::log10(1.0 - ts_ratio);
    for (int n = 1; n <= n_max; ++n) {
        const double s = std::abs(sinc(static_cast<double>(n) * (1.0 - ts_ratio)));
        eff.tone_levels_dbc[n] =
            s == 0.0 ? -kSaturatedDb : std::max(-kSaturatedDb, 20.0 * std::log10(s));
    }
    return eff;
}

SMatrix4 ideal_smatrix(double f_hz, double delta_s) {
    if (!(f_hz >= 0.0)) throw std::invalid_argument("ideal_smatrix: f must be >= 0");
    if (!(delta_s > 0.0)) throw std::invalid_argument("ideal_smatrix: delta must be positive");
    using namespace std::complex_literals;
    const std::complex<double> phase =
        std::exp(-1i * (2.0 * std::numbers::pi * f_hz * delta_s));
    SMatrix4 s{};
    s[1][0] = phase; // S21
    s[2][1] = phase; // S32
    s[3][2] = phase; // S43
    s[0][3] = phase; // S14
    return s;
}

} // namespace swdl
