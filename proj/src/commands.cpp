#include "swdl/commands.hpp"

#include "swdl/analytic.hpp"
#include "swdl/bounce.hpp"
#include "swdl/output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>

namespace swdl {

namespace {

std::vector<double> default_ratio_grid() {
    std::vector<double> g;
    for (int i = 0; i <= 100; ++i) g.push_back(0.005 * i);
    return g;
}

std::vector<double> bw_grid(const RunConfig& cfg) {
    std::vector<double> g;
    for (double w = 0.0; w <= cfg.bw_over_fm_max + 1e-12; w += cfg.bw_over_fm_step)
        g.push_back(w);
    return g;
}

void maybe_svg(const CommandOptions& opts, OutputSession& session, const std::string& name,
               const std::string& title, const std::string& xl, const std::string& yl,
               const std::vector<PlotSeries>& series) {
    if (!opts.emit_svg) return;
    write_svg_plot(session.path(name), title, xl, yl, series);
}

std::string pos_tag(double c) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%03d", static_cast<int>(std::lround(c * 100.0)));
    return buf;
}

void emit_il_curves(const RunConfig& cfg, OutputSession& session, const CommandOptions& opts,
                    const std::string& stem) {
    const double f_m = cfg.circ.f_mod_hz > 0.0 ? cfg.circ.f_mod_hz : 1.0 / (4.0 * cfg.circ.delta_s);
    const auto grid = bw_grid(cfg);

    for (const PassbandShape shape : {PassbandShape::BandPass, PassbandShape::LowPass}) {
        const bool bp = shape == PassbandShape::BandPass;
        TonePlan plan;
        plan.f_m_hz = f_m;
        plan.f_s_hz = 1000.0 * f_m; // band center, well above f_m
        plan.harmonic_range = cfg.analytic_harmonic_range;

        std::vector<std::string> header = {"bw_over_fm"};
        std::vector<std::vector<double>> rows(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i) rows[i].push_back(grid[i]);
        std::vector<PlotSeries> plots;
        for (const double c : cfg.carrier_positions) {
            header.push_back("il_db_carrier" + pos_tag(c));
            const auto curve = il_curve(plan, shape, grid, c);
            PlotSeries ps;
            ps.name = "carrier at " + format_number(c);
            for (std::size_t i = 0; i < curve.size(); ++i) {
                rows[i].push_back(curve[i].il_db);
                if (curve[i].il_db < kSaturatedDb) {
                    ps.x.push_back(curve[i].bw_over_fm);
                    ps.y.push_back(curve[i].il_db);
                }
            }
            plots.push_back(std::move(ps));
        }
        const std::string base = stem + (bp ? "_bandpass" : "_lowpass");
        write_csv(session.path(base + ".csv"), header, rows);
        maybe_svg(opts, session, base + ".svg",
                  bp ? "Filtering IL, band-pass line" : "Filtering IL, low-pass line",
                  "BW / f_m", "insertion loss (dB)", plots);
    }
}

void cmd_analytic_il(const RunConfig& cfg, OutputSession& session, const CommandOptions& opts) {
    emit_il_curves(cfg, session, opts, "analytic_il");
}

void cmd_repro_fig5(const RunConfig& cfg, OutputSession& session, const CommandOptions& opts) {
    emit_il_curves(cfg, session, opts, "fig5");
}

void emit_deviation(const RunConfig& cfg, OutputSession& session, const CommandOptions& opts,
                    bool split_fig7) {
    const auto grid = cfg.sweep_dd_ratios.empty() ? default_ratio_grid() : cfg.sweep_dd_ratios;
    if (split_fig7) {
        std::vector<std::vector<double>> il_rows, iso_rows;
        for (const double d : grid) {
            il_rows.push_back({d, deviation_il(d)});
            iso_rows.push_back({d, deviation_isolation(d)});
        }
        write_csv(session.path("fig7_il.csv"), {"dd_ratio", "il_db"}, il_rows);
        write_csv(session.path("fig7_isolation.csv"), {"dd_ratio", "isolation_db"}, iso_rows);
        PlotSeries il{"IL", {}, {}}, iso{"isolation", {}, {}};
        for (const auto& r : il_rows) {
            il.x.push_back(r[0]);
            il.y.push_back(r[1]);
        }
        for (const auto& r : iso_rows)
            if (r[1] < kSaturatedDb) {
                iso.x.push_back(r[0]);
                iso.y.push_back(r[1]);
            }
        maybe_svg(opts, session, "fig7.svg", "Delay-deviation IL and isolation",
                  "|delay deviation| / 2*delta", "dB", {il, iso});
        return;
    }
    std::vector<std::string> header = {"dd_ratio", "il_db", "isolation_db"};
    for (int n = 1; n <= 3; ++n) header.push_back("through_n" + std::to_string(n) + "_dbc");
    for (int n = 1; n <= 3; ++n) header.push_back("isolated_n" + std::to_string(n) + "_dbc");
    std::vector<std::vector<double>> rows;
    for (const double d : grid) {
        std::vector<double> row = {d, deviation_il(d), deviation_isolation(d)};
        for (int n = 1; n <= 3; ++n) row.push_back(modulated_tone_level(PortRole::Through, n, d));
        for (int n = 1; n <= 3; ++n)
            row.push_back(d == 0.0 ? 0.0 : modulated_tone_level(PortRole::Isolated, n, d));
        rows.push_back(std::move(row));
    }
    write_csv(session.path("analytic_deviation.csv"), header, rows);
}

void cmd_analytic_deviation(const RunConfig& cfg, OutputSession& session,
                            const CommandOptions& opts) {
    emit_deviation(cfg, session, opts, false);
}

void cmd_repro_fig7(const RunConfig& cfg, OutputSession& session, const CommandOptions& opts) {
    emit_deviation(cfg, session, opts, true);
}

void emit_switchtime(const RunConfig& cfg, OutputSession& session, const CommandOptions& opts,
                     const std::string& stem) {
    const auto grid = cfg.sweep_ts_ratios.empty() ? default_ratio_grid() : cfg.sweep_ts_ratios;
    std::vector<std::vector<double>> il_rows, tone_rows;
    for (const double x : grid) {
        const auto eff = switch_time_effects(x, 3);
        il_rows.push_back({x, eff.il_db});
        tone_rows.push_back({x, eff.tone_levels_dbc.at(1), eff.tone_levels_dbc.at(2),
                             eff.tone_levels_dbc.at(3)});
    }
    write_csv(session.path(stem + "_il.csv"), {"ts_ratio", "extra_il_db"}, il_rows);
    write_csv(session.path(stem + "_tones.csv"),
              {"ts_ratio", "n1_dbc", "n2_dbc", "n3_dbc"}, tone_rows);
    PlotSeries il{"extra IL", {}, {}};
    for (const auto& r : il_rows) {
        il.x.push_back(r[0]);
        il.y.push_back(r[1]);
    }
    maybe_svg(opts, session, stem + "_il.svg", "Switch-time loss", "t_s / 2*delta", "dB", {il});
}

void cmd_analytic_switchtime(const RunConfig& cfg, OutputSession& session,
                             const CommandOptions& opts) {
    emit_switchtime(cfg, session, opts, "analytic_switchtime");
}

void cmd_repro_fig9(const RunConfig& cfg, OutputSession& session, const CommandOptions& opts) {
    emit_switchtime(cfg, session, opts, "fig9");
}

std::vector<double> snapped_grid(const PreparedCirculator& prep, const RunConfig& cfg) {
    std::vector<double> grid;
    const int n = cfg.sweep_f_points;
    for (int i = 0; i < n; ++i) {
        const double f =
            n == 1 ? cfg.sweep_f_start_hz
                   : cfg.sweep_f_start_hz +
                         (cfg.sweep_f_stop_hz - cfg.sweep_f_start_hz) * i / (n - 1);
        const double snapped = prep.snap_frequency(f);
        if (grid.empty() || snapped > grid.back()) grid.push_back(snapped);
    }
    return grid;
}

void cmd_sim_sparams(const RunConfig& cfg, OutputSession& session, const CommandOptions& opts) {
    const PreparedCirculator prep(cfg.circ);
    const auto grid = snapped_grid(prep, cfg);
    const auto& sources = cfg.sweep_source_ports;
    const auto points =
        extract_sparams(prep.config(), grid, cfg.source_power_dbm, sources, opts.jobs);

    std::vector<std::string> header = {"f_hz"};
    for (const int src : sources)
        for (int row = 1; row <= 4; ++row) {
            header.push_back("s" + std::to_string(row) + std::to_string(src) + "_db");
            header.push_back("s" + std::to_string(row) + std::to_string(src) + "_phase_rad");
        }
    std::vector<std::vector<double>> rows;
    for (const auto& p : points) {
        std::vector<double> row = {p.f_hz};
        for (const int src : sources)
            for (int r = 1; r <= 4; ++r) {
                row.push_back(db20(p.s[r - 1][src - 1]));
                row.push_back(std::arg(p.s[r - 1][src - 1]));
            }
        rows.push_back(std::move(row));
    }
    write_csv(session.path("sparams.csv"), header, rows);

    // Group delay of the circulation through-path of each source.
    std::vector<std::string> gd_header = {"f_hz"};
    std::vector<std::vector<double>> gd_rows(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) gd_rows[i].push_back(grid[i]);
    for (const int src : sources) {
        const int through = src % 4 + 1;
        std::vector<std::complex<double>> s;
        for (const auto& p : points) s.push_back(p.s[through - 1][src - 1]);
        const auto gd = group_delay(grid, s);
        gd_header.push_back("gd_s" + std::to_string(through) + std::to_string(src) + "_s");
        for (std::size_t i = 0; i < grid.size(); ++i) gd_rows[i].push_back(gd.delay_s[i]);
    }
    write_csv(session.path("group_delay.csv"), gd_header, gd_rows);

    std::vector<PlotSeries> plots;
    for (std::size_t c = 0; c < sources.size(); ++c) {
        const int src = sources[c];
        const int through = src % 4 + 1;
        PlotSeries ps;
        ps.name = "S" + std::to_string(through) + std::to_string(src);
        for (const auto& p : points) {
            ps.x.push_back(p.f_hz);
            ps.y.push_back(db20(p.s[through - 1][src - 1]));
        }
        plots.push_back(std::move(ps));
    }
    maybe_svg(opts, session, "sparams.svg", "Simulated S-parameters", "f (Hz)", "dB", plots);
}

double default_carrier(const RunConfig& cfg) {
    const auto& la = cfg.circ.line_a;
    if (la.variant == DelayLineVariant::Sampled)
        return 0.5 * (la.sampled_response.front().f_hz + la.sampled_response.back().f_hz);
    if (la.f_u_hz >= 1e15) return 10.0 / (4.0 * cfg.circ.delta_s); // delay-only line: 10*f_mod
    return 0.5 * (la.f_l_hz + la.f_u_hz);
}

void cmd_sim_spectrum(const RunConfig& cfg, OutputSession& session, const CommandOptions& opts) {
    const PreparedCirculator prep(cfg.circ);
    const double f_s =
        prep.snap_frequency(cfg.source_f_hz > 0.0 ? cfg.source_f_hz : default_carrier(cfg));
    const auto spec = extract_spectrum(prep.config(), cfg.source_port, f_s, cfg.observe_port,
                                       cfg.source_power_dbm, cfg.spectrum_harmonics);
    std::vector<std::vector<double>> rows;
    for (const auto& tone : spec.tones)
        rows.push_back({static_cast<double>(tone.n), tone.f_hz, tone.power_dbm, tone.dbc});
    write_csv(session.path("spectrum.csv"), {"n", "f_hz", "power_dbm", "dbc"}, rows);
    PlotSeries ps{"port " + std::to_string(cfg.observe_port), {}, {}};
    for (const auto& tone : spec.tones) {
        ps.x.push_back(tone.f_hz);
        ps.y.push_back(tone.power_dbm);
    }
    maybe_svg(opts, session, "spectrum.svg", "Output spectrum", "f (Hz)", "dBm", {ps});
}

void cmd_sim_bounce(const RunConfig& cfg, OutputSession& session, const CommandOptions& opts) {
    const double quarter = 1.0 / (4.0 * (cfg.circ.f_mod_hz > 0.0 ? cfg.circ.f_mod_hz
                                                                 : 1.0 / (4.0 * cfg.circ.delta_s)));
    const double width =
        cfg.bounce_pulse_width_s > 0.0 ? cfg.bounce_pulse_width_s : quarter / 8.0;
    const auto trace = bounce_trace(cfg.circ, cfg.source_port, width, cfg.bounce_n_periods,
                                    cfg.bounce_event_switch_time_s);
    std::vector<std::vector<double>> rows;
    for (const auto& seg : trace.segments)
        rows.push_back({seg.line == 'A' ? 0.0 : 1.0, seg.forward ? 1.0 : 0.0, seg.t_start_s,
                        seg.t_end_s, seg.amplitude, static_cast<double>(seg.origin_port),
                        static_cast<double>(static_cast<int>(seg.fate)),
                        static_cast<double>(seg.delivered_port)});
    write_csv(session.path("bounce.csv"),
              {"line_0a_1b", "forward", "t_start_s", "t_end_s", "amplitude", "origin_port",
               "fate_0del_1refl_2abs", "delivered_port"},
              rows);
    (void)opts;
}

Fig17Summary summarize_fig17(const std::vector<double>& grid,
                             const std::vector<SparamPoint>& points) {
    Fig17Summary sum;
    std::vector<double> il(grid.size()), iso(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        il[i] = -db20(points[i].s[1][0]);  // S21 through
        iso[i] = -db20(points[i].s[0][1]); // S12 reverse
    }
    std::size_t imin = 0;
    for (std::size_t i = 1; i < il.size(); ++i)
        if (il[i] < il[imin]) imin = i;
    sum.min_il_db = il[imin];
    sum.f_min_il_hz = grid[imin];

    // 3 dB band around the IL minimum.
    std::size_t lo = imin, hi = imin;
    while (lo > 0 && il[lo - 1] <= sum.min_il_db + 3.0) --lo;
    while (hi + 1 < il.size() && il[hi + 1] <= sum.min_il_db + 3.0) ++hi;
    sum.bw_hz = grid[hi] - grid[lo];
    sum.center_hz = 0.5 * (grid[hi] + grid[lo]);
    sum.min_isolation_in_band_db = iso[lo];
    for (std::size_t i = lo; i <= hi; ++i)
        sum.min_isolation_in_band_db = std::min(sum.min_isolation_in_band_db, iso[i]);
    return sum;
}

Fig17Summary run_fig17_impl(const RunConfig& cfg, OutputSession& session,
                            const CommandOptions& opts) {
    const PreparedCirculator prep(cfg.circ);
    const auto grid = snapped_grid(prep, cfg);
    const auto points =
        extract_sparams(prep.config(), grid, cfg.source_power_dbm, {1, 2}, opts.jobs);

    std::vector<std::vector<double>> rows;
    std::vector<std::complex<double>> s21;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto& s = points[i].s;
        s21.push_back(s[1][0]);
        rows.push_back({grid[i], db20(s[1][0]), db20(s[0][1]), db20(s[0][0]), db20(s[3][0]),
                        db20(s[2][1]), std::arg(s[1][0])});
    }
    write_csv(session.path("fig17_sparams.csv"),
              {"f_hz", "s21_db", "s12_db", "s11_db", "s41_db", "s32_db", "s21_phase_rad"}, rows);

    const auto gd = group_delay(grid, s21);
    std::vector<std::vector<double>> gd_rows;
    for (std::size_t i = 0; i < grid.size(); ++i) gd_rows.push_back({grid[i], gd.delay_s[i]});
    write_csv(session.path("fig17_group_delay.csv"), {"f_hz", "gd_s21_s"}, gd_rows);

    const Fig17Summary sum = summarize_fig17(grid, points);
    write_csv(session.path("fig17_summary.csv"),
              {"min_il_db", "f_min_il_hz", "center_hz", "bw_hz", "min_isolation_in_band_db"},
              {{sum.min_il_db, sum.f_min_il_hz, sum.center_hz, sum.bw_hz,
                sum.min_isolation_in_band_db}});

    std::vector<PlotSeries> plots(2);
    plots[0].name = "S21";
    plots[1].name = "S12";
    for (std::size_t i = 0; i < grid.size(); ++i) {
        plots[0].x.push_back(grid[i]);
        plots[0].y.push_back(db20(points[i].s[1][0]));
        plots[1].x.push_back(grid[i]);
        plots[1].y.push_back(db20(points[i].s[0][1]));
    }
    maybe_svg(opts, session, "fig17_sparams.svg", "Circulator S-parameters", "f (Hz)", "dB",
              plots);
    return sum;
}

using CommandFn = std::function<void(const RunConfig&, OutputSession&, const CommandOptions&)>;

const std::map<std::string, CommandFn>& command_table() {
    static const std::map<std::string, CommandFn> table = {
        {"analytic-il", cmd_analytic_il},
        {"analytic-deviation", cmd_analytic_deviation},
        {"analytic-switchtime", cmd_analytic_switchtime},
        {"sim-sparams", cmd_sim_sparams},
        {"sim-spectrum", cmd_sim_spectrum},
        {"sim-bounce", cmd_sim_bounce},
        {"repro-fig5", cmd_repro_fig5},
        {"repro-fig7", cmd_repro_fig7},
        {"repro-fig9", cmd_repro_fig9},
        {"repro-fig17",
         [](const RunConfig& cfg, OutputSession& session, const CommandOptions& opts) {
             const Fig17Summary sum = run_fig17_impl(cfg, session, opts);
             std::printf("min IL %.3f dB at %.4g Hz; 3 dB band %.4g Hz centered %.4g Hz; "
                         "min in-band isolation %.2f dB\n",
                         sum.min_il_db, sum.f_min_il_hz, sum.bw_hz, sum.center_hz,
                         sum.min_isolation_in_band_db);
         }},
    };
    return table;
}

} // namespace

const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const auto& [name, fn] : command_table()) v.push_back(name);
        return v;
    }();
    return names;
}

Fig17Summary run_fig17(const RunConfig& cfg, const CommandOptions& opts) {
    OutputSession session(opts.out_dir);
    const Fig17Summary sum = run_fig17_impl(cfg, session, opts);
    session.commit();
    return sum;
}

int run_command(const std::string& command, const RunConfig& cfg, const CommandOptions& opts) {
    const auto& table = command_table();
    const auto it = table.find(command);
    if (it == table.end()) {
        std::cerr << "unknown command: " << command << "\n";
        return 2;
    }
    try {
        OutputSession session(opts.out_dir);
        it->second(cfg, session, opts);
        session.commit();
        return 0;
    } catch (const ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "simulation error: " << e.what() << "\n";
        return 3;
    }
}

} // namespace swdl
