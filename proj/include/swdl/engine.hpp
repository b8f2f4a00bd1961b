// Time-domain traveling-wave simulation of the 4-port switched-delay-line
// circulator.
//
// Topology: two delay lines (A, B) between two switch modules. The left
// module connects ports 1 and 3 to the lines' left ends, the right module
// ports 2 and 4 to the right ends. Gates: L1 drives port1<->A and
// port3<->B, L2 the complements; R1 drives port2<->A and port4<->B, R2 the
// complements. Gate phases default to {0, delta, 2*delta, 3*delta} where
// delta = 1/(4*f_mod), which circulates 1->2->3->4->1.
//
// Wave formulation: every node carries incident/reflected waves normalized
// to z0. Each switch module is reduced per sample to a 4x4 real scattering
// matrix (ports, lineA, lineB) from its instantaneous conductance network;
// delay lines are FIR kernels acting on the wave streams. Incident and
// reflected waves at the ports separate analytically.

#pragma once

#include "swdl/analytic.hpp"
#include "swdl/components.hpp"

#include <array>
#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace swdl {

struct CirculatorConfig {
    double delta_s = 285e-9;      // nominal line group delay
    double f_mod_hz = 0.0;        // 0 = derive 1/(4*delta)
    std::array<double, 4> control_phase_s{-1.0, -1.0, -1.0, -1.0}; // L1,R1,L2,R2; <0 = default ladder
    DelayLineModel line_a;
    DelayLineModel line_b;
    SwitchModel sw;
    bool shunt_switches = true;   // series-shunt-series branch cells
    bool all_switches_on = false; // static (unmodulated) mode
    bool line_b_blocked = false;  // absorb line B (single-module testbench)
    double z0_ohm = 50.0;
    double sample_rate_hz = 0.0;  // 0 = auto (commensurate, >= 20*f_u)
    int n_discard_periods = 10;
    int n_analyze_periods = 32;
    int kernel_taps = 0;          // 0 = auto
    double taper_hz = 0.0;        // 0 = auto
    std::array<std::optional<MatchingNetwork>, 4> matching{}; // A-left, A-right, B-left, B-right
};

// Validates the config and fills the derived fields (f_mod, sample rate,
// control phases, kernel sizing). The sample rate is made commensurate
// with the modulation period and must be >= 20*f_u for every band-limited
// line; a line transparent up to Nyquist is exempt (it is simulated as a
// pure delay).
CirculatorConfig finalize_config(const CirculatorConfig& cfg);

struct SimulationResult {
    double sample_rate_hz = 0.0;
    double f_mod_hz = 0.0;
    double f_s_hz = 0.0;
    double amplitude_sqrt_w = 0.0;
    int source_port = 1;
    std::int64_t steady_start = 0;   // first analyzed sample
    std::int64_t n_analyze = 0;      // analyzed samples (integer modulation periods)
    std::array<std::vector<double>, 4> a; // incident wave per port
    std::array<std::vector<double>, 4> b; // reflected/outgoing wave per port
    // Waves entering the delay lines (node taps between switches and lines).
    std::vector<double> line_in_a_left, line_in_a_right;
    std::vector<double> line_in_b_left, line_in_b_right;

    // Complex amplitude (peak) of the steady-state tone at f_hz in a
    // recorded series; f_hz must fall on the analysis bin grid.
    std::complex<double> tone_amplitude(const std::vector<double>& series, double f_hz) const;
};

// Precomputed kernels and per-sample junction matrices, shareable across
// simulation runs and threads.
class PreparedCirculator {
  public:
    explicit PreparedCirculator(const CirculatorConfig& cfg);

    const CirculatorConfig& config() const { return cfg_; }

    SimulationResult simulate_tone(int source_port, double f_s_hz, double amplitude_sqrt_w,
                                   int n_analyze_periods = 0) const;

    // Nearest carrier frequency that puts an integer number of cycles in
    // the analysis window.
    double snap_frequency(double f_hz, int n_analyze_periods = 0) const;

  private:
    struct Trimmed {
        std::vector<double> grev; // kernel taps reversed, trimmed
        std::int64_t tau_max = 0;
        bool active = false;
    };
    struct LineState {
        Trimmed h11, h21, h12, h22;
        double d11 = 0.0, d22 = 0.0; // instantaneous self-reflection taps
    };
    using Mat4 = std::array<std::array<double, 4>, 4>;

    CirculatorConfig cfg_;
    std::int64_t n_per_mod_ = 0;
    LineState line_a_, line_b_;
    std::vector<Mat4> m_left_, m_right_;

    void build_matrices();
    static LineState trim_kernel(const LineKernel& k);

    friend struct EngineTestAccess;
};

SimulationResult simulate_tone(const CirculatorConfig& cfg, int source_port, double f_s_hz,
                               double amplitude_sqrt_w, int n_analyze_periods = 0);

struct SparamPoint {
    double f_hz = 0.0;
    SMatrix4 s{}; // only columns for simulated source ports are filled
};

// S-parameters at the carrier of each excitation. Each frequency/source
// pair is an independent run; runs execute on `jobs` worker threads and
// results are returned in grid order.
std::vector<SparamPoint> extract_sparams(const CirculatorConfig& cfg,
                                         const std::vector<double>& f_grid_hz,
                                         double power_dbm,
                                         const std::vector<int>& source_ports = {1, 2},
                                         int jobs = 1);

struct Tone {
    double f_hz = 0.0;
    double power_dbm = -kSaturatedDb;
    double dbc = 0.0;
    int n = 0; // 0 = carrier, otherwise intra-modulated order
};

struct ToneSpectrum {
    int observe_port = 2;
    double carrier_power_dbm = -kSaturatedDb;
    std::vector<Tone> tones;
};

ToneSpectrum extract_spectrum(const CirculatorConfig& cfg, int source_port, double f_s_hz,
                              int observe_port, double power_dbm, int n_harmonics = 10);

struct GroupDelayResult {
    std::vector<double> delay_s;
    bool unambiguous = true; // false when adjacent phase steps approach pi
};

GroupDelayResult group_delay(const std::vector<double>& f_grid_hz,
                             const std::vector<std::complex<double>>& s_values);

// Runs fn(i) for i in [0, n) on `jobs` threads. Exceptions are rethrown.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn);

double dbm_to_amplitude(double power_dbm);
double db20(std::complex<double> x);

} // namespace swdl
